#pragma once

#include "covrel/dynamics.hpp"
#include "covrel/geometry.hpp"
#include "covrel/interval.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace covrel {

enum class Verdict { Verified, NotVerified, Error };
enum class Mode { Fiber, Full, Sequence };
enum class Condition { Exit, Entry, Expansion, Degree };

std::string to_string(Verdict v);
std::string to_string(Mode m);
std::string to_string(Condition c);
Mode parse_mode(std::string_view text);

/// A cell on which a condition could not be certified, with the image that
/// was too wide or misplaced. For refined checks this is the failing leaf.
struct FailedCell {
    Condition condition;
    Cell cell;
    Image image;
};

struct CheckOptions {
    /// Bisections of a failing cell before it is reported.
    std::size_t refine_depth = 10;
    /// Stop scanning once this many failures are known (0 = no limit).
    std::size_t max_failures = 16;
    /// Worker threads; results do not depend on this.
    unsigned jobs = 1;
};

/// Outcome of one condition.
struct ConditionResult {
    Condition condition;
    bool ok = true;
    std::size_t cells_checked = 0;
    std::vector<FailedCell> failures;
    /// Scanning stopped at max_failures.
    bool truncated = false;
};

struct CoveringReport {
    Verdict verdict = Verdict::Error;
    Mode mode = Mode::Full;
    std::string map_name;
    bool exit_ok = false;
    bool entry_ok = false;
    bool expansion_ok = false;
    std::optional<long> degree;
    std::optional<bool> degree_ok;
    std::size_t exit_cells = 0;
    std::size_t entry_cells = 0;
    std::size_t expansion_cells = 0;
    std::vector<FailedCell> failed_cells;
    std::vector<std::string> reasons;
    std::string error;
    double wall_time_s = 0.0;
    /// Sequence mode: one report per member.
    std::vector<CoveringReport> members;
    std::optional<std::size_t> first_failing_index;
};

class DegreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Cell predicates (no refinement). True when the condition is certified.
bool exit_holds(const HomotopySpec& h, const DomainSpec& d, const Cell& c);
bool entry_holds(const HomotopySpec& h, const DomainSpec& d, const Cell& c);
bool expansion_holds(const HomotopySpec& h, const Interval& theta);

/// h([0,1] x D-) ∩ D = ∅: the x image of every exit-face cell lies
/// certainly left or certainly right of [-r_u, r_u].
ConditionResult check_exit(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                           const CheckOptions& opt = {});

/// h([0,1] x D) ∩ D+ = ∅: for every cell of D, the x image is outside
/// [-r_u, r_u] or the y image lies in the interior of [-r_s, r_s].
ConditionResult check_entry(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                            const CheckOptions& opt = {});

/// |A(theta)| > 1 on each of n_theta pieces of the base circle.
ConditionResult check_expansion(const HomotopySpec& h, const DomainSpec& d, std::size_t n_theta);

/// Degree of the circle map with continuous lift eta. The base circle is
/// cut into n_theta pieces, pieces whose lift image is not narrower than
/// half a period are bisected (at most depth_limit times), and the chained
/// increments must enclose exactly one multiple of the period.
long compute_degree(const EtaLift& eta, std::size_t n_theta, const Interval& period = Interval::two_pi(),
                    std::size_t depth_limit = 20);

CoveringReport verify_fiber_covering(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                                     const CheckOptions& opt = {});
CoveringReport verify_full_covering(const HomotopySpec& h, const DomainSpec& d, const SubdivisionScheme& s,
                                    const CheckOptions& opt = {});
/// Every member must verify in full mode. Throws std::invalid_argument for
/// an empty sequence.
CoveringReport verify_sequence(std::span<const HomotopySpec> hs, const DomainSpec& d, const SubdivisionScheme& s,
                               const CheckOptions& opt = {});

/// Re-evaluates the tagged condition on the cell alone, without
/// refinement. True when it fails again.
bool refails(const HomotopySpec& h, const DomainSpec& d, const FailedCell& f);

/// Smallest natural k >= 1 with C * lambda^k < 1, certified with an upward
/// bound on the product. Requires C > 0 and 0 < lambda < 1.
unsigned nhim_min_k(const Interval& c, const Interval& lambda);

/// Worst-case fiber rates of the k-th iterate of a linearisation with
/// constants C, lambda: expansion 1 / (C lambda^k), contraction C lambda^k.
struct NhimRates {
    unsigned k;
    Interval expansion;
    Interval contraction;
};
NhimRates nhim_rates(const Interval& c, const Interval& lambda);

} // namespace covrel
