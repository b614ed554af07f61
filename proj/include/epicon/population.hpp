#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <variant>
#include <vector>

#include "epicon/epidemic.hpp"
#include "epicon/network.hpp"

namespace epicon {

struct InfectionMode;

enum class Status : std::uint8_t { Susceptible, Infectious, Cured, Recovered };

/// Integer set sizes; `recovered` includes agents in the Cured status.
struct Cardinalities {
  std::size_t susceptible = 0;
  std::size_t infectious = 0;
  std::size_t recovered = 0;

  std::size_t total() const { return susceptible + infectious + recovered; }
  friend bool operator==(const Cardinalities&, const Cardinalities&) = default;
};

/// |S| = ceil(S n), |R| = ceil(R n), |I| = n - |S| - |R|. When the two
/// ceilings overshoot n, |I| is 0 and |R| absorbs the excess.
Cardinalities integer_cardinalities(const SirState& state, std::size_t n);

/// Per-agent epidemic status. Cured lasts exactly one step.
class StatusLedger {
 public:
  static constexpr std::int64_t kNever = -1;

  StatusLedger() = default;
  explicit StatusLedger(std::size_t n) : status_(n, Status::Susceptible), infected_since_(n, kNever) {}

  std::size_t size() const { return status_.size(); }
  Status status(NodeId i) const { return status_[i]; }
  const std::vector<Status>& statuses() const { return status_; }
  std::int64_t infected_since(NodeId i) const { return infected_since_[i]; }
  std::int64_t step() const { return step_; }

  std::size_t count(Status s) const;
  Cardinalities cardinalities() const;
  std::vector<bool> mask(Status s) const;

  /// Direct edit used to build initial and test ledgers.
  void set(NodeId i, Status s, std::int64_t since = kNever);

  friend StatusLedger advance_statuses(const StatusLedger&, const Cardinalities&,
                                       const InfectionMode&,
                                       const Partition&, std::mt19937_64&);

 private:
  std::vector<Status> status_;
  std::vector<std::int64_t> infected_since_;
  std::int64_t step_ = 0;
};

namespace infection {
struct Homogeneous {};
/// New infections fill `target` subgroup first.
struct Gathered {
  std::uint32_t target = 0;
};
}  // namespace infection

struct InfectionMode {
  std::variant<infection::Homogeneous, infection::Gathered> kind;
};

/// Moves the ledger one step towards `target`:
///  - every Cured agent becomes Recovered;
///  - |S|_old - |S|_new Susceptible agents become Infectious (uniform, or
///    drawn from the gathered target subgroup until it has no susceptibles);
///  - |R|_new - |R|_old Infectious agents become Cured, uniform among those
///    infectious before this step (newly infected only if that pool runs dry).
/// Throws std::logic_error when |S| would grow, |R| would shrink, or the
/// targets do not sum to n.
StatusLedger advance_statuses(const StatusLedger& ledger,
                              const Cardinalities& target,
                              const InfectionMode& mode,
                              const Partition& partition, std::mt19937_64& rng);

/// Initial ledger with the requested counts; infectious agents are placed
/// according to `mode`, recovered ones uniformly among the rest.
StatusLedger initial_ledger(const Cardinalities& counts, const InfectionMode& mode,
                            const Partition& partition, std::mt19937_64& rng);

/// Agents executing the consensus protocol and subject to safety: the
/// Susceptible and Recovered ones. Cured agents are excluded for their round.
std::vector<NodeId> regular_set(const StatusLedger& ledger);

/// Writes the header `k,n_S,n_I,n_C,n_R,I_1,...,I_m,w_max`.
void write_status_header(std::ostream& out, std::size_t m);

struct StatusRow {
  std::int64_t k = 0;
  std::size_t n_s = 0, n_i = 0, n_c = 0, n_r = 0;
  std::vector<double> local_ratios;
  double w_max = 0.0;
};

void write_status_row(std::ostream& out, const StatusRow& row);

}  // namespace epicon
