#pragma once

#include "covrel/expression.hpp"
#include "covrel/geometry.hpp"
#include "covrel/interval.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace covrel {

/// Interval image of a cell under a map or homotopy.
struct Image {
    Interval theta;
    Interval x;
    Interval y;
};

/// Named constants of a map family. Values are intervals; a fixed parameter
/// is a degenerate (or rounding-width) interval.
using Params = std::map<std::string, Interval>;

/// Interval extension of a cell map. Reads theta, x, y and beta of the
/// cell; homotopies also read alpha.
using CellFunction = std::function<Image(const Cell&)>;

struct MapSpec {
    std::string name;
    CellFunction eval;
    /// Range of the family parameter beta (a point when unused).
    Interval beta_range{0.0};
    Params params;
};

/// Continuous lift L: [0, period] -> R of the base map at the end of a
/// homotopy.
struct EtaLift {
    std::function<Interval(const Interval&)> lift;
    std::optional<long> declared_degree;
    std::string description;
};

/// h(alpha, .) with h(0, .) = base_map and h(1, (theta; x, y)) =
/// (eta(theta); A(theta) x, 0). The endpoint is declared, not derived.
struct HomotopySpec {
    std::string name;
    CellFunction eval;
    std::optional<EtaLift> eta;
    /// A(theta), the linear coefficient on x at alpha = 1. Empty when not
    /// declared.
    std::function<Interval(const Interval&)> expansion;
    MapSpec base_map;
    Interval beta_range{0.0};
};

/// Evaluation failed inside a cell; the message names the cell.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, const Cell& cell);
    [[nodiscard]] const Cell& cell() const noexcept { return cell_; }

private:
    Cell cell_;
};

/// Images of a cell; interval errors are rethrown as EvaluationError.
Image eval_map(const MapSpec& f, const Cell& c);
Image eval_homotopy(const HomotopySpec& h, const Cell& c);

// Built-in systems. Recognised parameters:
//   mu   stable contraction of the toy and CAP maps (|mu| < 1/2 for toy maps)
//   beta family parameter of toy_fbeta, a point or a range in [0, 1]
//   k    winding of the base map kθ mod 2π for toy maps and linear_nhim
//   a, b fiber rates of linear_nhim
//
// Map names: toy_f0, toy_f1, toy_fbeta, cap_map, linear_nhim.
// Homotopy names: toy_homotopy, cap_homotopy, plus every map name (its
// natural homotopy). Short aliases: cap, toy.
MapSpec builtin_map(std::string_view name, const Params& params);
HomotopySpec builtin_homotopy(std::string_view name, const Params& params);
std::variant<MapSpec, HomotopySpec> builtin(std::string_view name, const Params& params);
std::vector<std::string> builtin_names();

/// Expression-language definitions. Map expressions see theta, x, y and
/// beta; homotopy expressions additionally alpha. Unless all of h_theta,
/// h_x and h_y are given, the homotopy is the straight line
/// (1 - alpha) f + alpha (eta; A x, 0), with theta_out read as a real-valued
/// lift and reduced mod 2pi after blending.
struct ExpressionMapDefinition {
    std::string name = "custom";
    std::string theta_out;
    std::string x_out;
    std::string y_out;
    std::string h_theta;
    std::string h_x;
    std::string h_y;
    std::string eta_lift;
    std::string a_coeff;
    Params constants;
    Interval beta_range{0.0};
};

MapSpec expression_map(const ExpressionMapDefinition& def);
HomotopySpec expression_homotopy(const ExpressionMapDefinition& def);

/// Lift from an expression in theta.
EtaLift expression_lift(const std::string& text, const Params& constants = {});

/// Replaces a homotopy's declared endpoint.
void override_eta(HomotopySpec& h, EtaLift eta);
void override_expansion(HomotopySpec& h, const Interval& a);

/// Image of the degenerate point (theta; x, y) with the family parameter.
Image eval_map_at(const MapSpec& f, double theta, double x, double y, double beta = 0.0);

/// Samples random cells with alpha = 1 and checks that the homotopy image
/// intersects the declared endpoint (eta(theta) mod period; A x, 0).
/// Returns a description of the first inconsistency, or nullopt.
std::optional<std::string> endpoint_inconsistency(const HomotopySpec& h, const DomainSpec& d, std::size_t samples,
                                                  unsigned seed = 1);

} // namespace covrel
