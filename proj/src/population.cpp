#include "epicon/population.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "epicon/numeric.hpp"

namespace epicon {

namespace {

// Picks `count` distinct entries of `pool` uniformly (partial Fisher-Yates)
// and returns them; `pool` is reordered.
std::vector<NodeId> sample(std::vector<NodeId>& pool, std::size_t count,
                           std::mt19937_64& rng) {
  if (count > pool.size()) throw std::logic_error("sample: pool too small");
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::vector<NodeId> choose_infections(const std::vector<Status>& status,
                                      std::size_t count,
                                      const InfectionMode& mode,
                                      const Partition& partition,
                                      std::mt19937_64& rng) {
  if (count == 0) return {};
  std::vector<NodeId> chosen;
  if (const auto* g = std::get_if<infection::Gathered>(&mode.kind)) {
    if (g->target >= partition.count()) {
      throw std::invalid_argument("gathered infection: target subgroup out of range");
    }
    std::vector<NodeId> inside;
    for (NodeId i : partition.members(g->target)) {
      if (status[i] == Status::Susceptible) inside.push_back(i);
    }
    chosen = sample(inside, std::min(count, inside.size()), rng);
    if (chosen.size() == count) return chosen;
  }
  std::vector<NodeId> pool;
  for (NodeId i = 0; i < status.size(); ++i) {
    if (status[i] == Status::Susceptible &&
        std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
      pool.push_back(i);
    }
  }
  auto rest = sample(pool, count - chosen.size(), rng);
  chosen.insert(chosen.end(), rest.begin(), rest.end());
  return chosen;
}

}  // namespace

Cardinalities integer_cardinalities(const SirState& state, std::size_t n) {
  state.validate();
  const auto nd = static_cast<double>(n);
  const auto s = static_cast<std::size_t>(std::max<std::int64_t>(0, ceil_count(state.s * nd)));
  auto r = static_cast<std::size_t>(std::max<std::int64_t>(0, ceil_count(state.r * nd)));
  Cardinalities c;
  c.susceptible = std::min(s, n);
  r = std::min(r, n);
  if (c.susceptible + r > n) {
    c.infectious = 0;
    c.recovered = n - c.susceptible;
  } else {
    c.recovered = r;
    c.infectious = n - c.susceptible - r;
  }
  return c;
}

std::size_t StatusLedger::count(Status s) const {
  return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), s));
}

Cardinalities StatusLedger::cardinalities() const {
  Cardinalities c;
  for (Status s : status_) {
    switch (s) {
      case Status::Susceptible: ++c.susceptible; break;
      case Status::Infectious: ++c.infectious; break;
      case Status::Cured:
      case Status::Recovered: ++c.recovered; break;
    }
  }
  return c;
}

std::vector<bool> StatusLedger::mask(Status s) const {
  std::vector<bool> m(status_.size());
  for (std::size_t i = 0; i < status_.size(); ++i) m[i] = status_[i] == s;
  return m;
}

void StatusLedger::set(NodeId i, Status s, std::int64_t since) {
  status_.at(i) = s;
  infected_since_.at(i) = since;
}

StatusLedger advance_statuses(const StatusLedger& ledger,
                              const Cardinalities& target,
                              const InfectionMode& mode,
                              const Partition& partition, std::mt19937_64& rng) {
  const std::size_t n = ledger.size();
  const Cardinalities now = ledger.cardinalities();
  if (target.total() != n) {
    throw std::logic_error("advance_statuses: targets do not sum to n");
  }
  if (target.susceptible > now.susceptible || target.recovered < now.recovered) {
    throw std::logic_error(
        "advance_statuses: target violates SIR monotonicity (|S| grew or |R| shrank)");
  }
  const std::size_t new_infections = now.susceptible - target.susceptible;
  const std::size_t new_recoveries = target.recovered - now.recovered;
  if (new_recoveries > now.infectious + new_infections) {
    throw std::logic_error("advance_statuses: more recoveries than infectious agents");
  }

  StatusLedger next = ledger;
  next.step_ = ledger.step_ + 1;
  for (auto& s : next.status_) {
    if (s == Status::Cured) s = Status::Recovered;
  }

  std::vector<NodeId> veterans;
  for (NodeId i = 0; i < n; ++i) {
    if (ledger.status_[i] == Status::Infectious) veterans.push_back(i);
  }

  const auto infected =
      choose_infections(ledger.status_, new_infections, mode, partition, rng);
  for (NodeId i : infected) {
    next.status_[i] = Status::Infectious;
    next.infected_since_[i] = next.step_;
  }

  std::vector<NodeId> cured = sample(veterans, std::min(new_recoveries, veterans.size()), rng);
  if (cured.size() < new_recoveries) {
    std::vector<NodeId> fresh = infected;
    auto more = sample(fresh, new_recoveries - cured.size(), rng);
    cured.insert(cured.end(), more.begin(), more.end());
  }
  for (NodeId i : cured) next.status_[i] = Status::Cured;
  return next;
}

StatusLedger initial_ledger(const Cardinalities& counts, const InfectionMode& mode,
                            const Partition& partition, std::mt19937_64& rng) {
  const std::size_t n = counts.total();
  if (partition.assignment().size() != n) {
    throw std::invalid_argument("initial_ledger: partition size does not match n");
  }
  StatusLedger ledger(n);
  const auto infected = choose_infections(ledger.statuses(), counts.infectious,
                                          mode, partition, rng);
  for (NodeId i : infected) ledger.set(i, Status::Infectious, 0);

  std::vector<NodeId> pool;
  for (NodeId i = 0; i < n; ++i) {
    if (ledger.status(i) == Status::Susceptible) pool.push_back(i);
  }
  for (NodeId i : sample(pool, counts.recovered, rng)) {
    ledger.set(i, Status::Recovered);
  }
  return ledger;
}

std::vector<NodeId> regular_set(const StatusLedger& ledger) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < ledger.size(); ++i) {
    const Status s = ledger.status(i);
    if (s == Status::Susceptible || s == Status::Recovered) out.push_back(i);
  }
  return out;
}

void write_status_header(std::ostream& out, std::size_t m) {
  out << "k,n_S,n_I,n_C,n_R";
  for (std::size_t s = 1; s <= m; ++s) out << ",I_" << s;
  out << ",w_max\n";
}

void write_status_row(std::ostream& out, const StatusRow& row) {
  char buf[64];
  out << row.k << ',' << row.n_s << ',' << row.n_i << ',' << row.n_c << ','
      << row.n_r;
  for (double v : row.local_ratios) {
    std::snprintf(buf, sizeof buf, ",%.10g", v);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, ",%.10g\n", row.w_max);
  out << buf;
}

}  // namespace epicon
