#include "asianfb/curve.hpp"

#include "asianfb/fbsolver.hpp"

namespace asianfb {

FreeBoundaryCurve to_curve(const SolutionField& field, std::string label)
{
    FreeBoundaryCurve curve;
    curve.label = label.empty() ? field.method.label() : std::move(label);
    curve.method = field.method;
    curve.params = field.params;
    curve.tau = field.grid.tau;
    curve.rho = field.rho;
    curve.iterations = field.iterations;
    return curve;
}

} // namespace asianfb
