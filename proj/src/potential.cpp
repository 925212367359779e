#include "diracsol/potential.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "diracsol/errors.hpp"

namespace diracsol {

PeriodicPotential::PeriodicPotential(CosineSeries coeffs, ParityClass parity)
    : parity_(parity)
{
    for (auto const& [m, amp] : coeffs) {
        if (m <= 0) {
            throw ValidationError("cosine index must be positive, got " + std::to_string(m));
        }
        if (!std::isfinite(amp)) {
            throw ValidationError("non-finite amplitude at index " + std::to_string(m));
        }
        if (amp == 0.0) {
            continue;
        }
        bool even = (m % 2 == 0);
        if (even != (parity == ParityClass::EvenIndex)) {
            std::ostringstream s;
            s << "index " << m << " violates the " << to_string(parity) << " parity class";
            throw ValidationError(s.str());
        }
        coeffs_[m] = amp;
    }
}

PeriodicPotential PeriodicPotential::from_pairs(std::vector<std::pair<int, double>> const& pairs, ParityClass parity)
{
    CosineSeries series;
    for (auto const& [m, amp] : pairs) {
        if (series.count(m)) {
            throw ValidationError("duplicate cosine index " + std::to_string(m));
        }
        series[m] = amp;
    }
    return PeriodicPotential(std::move(series), parity);
}

int PeriodicPotential::max_index() const
{
    return diracsol::max_index(coeffs_);
}

double PeriodicPotential::operator()(double x) const
{
    return evaluate(coeffs_, x);
}

double PeriodicPotential::sup_bound() const
{
    double s{0};
    for (auto const& [m, amp] : coeffs_) {
        s += std::abs(amp);
    }
    return s;
}

std::vector<std::pair<int, double>> PeriodicPotential::pairs() const
{
    return {coeffs_.begin(), coeffs_.end()};
}

CosineSeries combine(PeriodicPotential const& V, PeriodicPotential const& W, double delta)
{
    CosineSeries out = V.coeffs();
    for (auto const& [m, amp] : W.coeffs()) {
        out[m] += delta * amp;
    }
    return out;
}

double evaluate(CosineSeries const& series, double x)
{
    double s{0};
    double xr = x - std::floor(x);
    for (auto const& [m, amp] : series) {
        s += amp * std::cos(2 * std::numbers::pi * m * xr);
    }
    return s;
}

std::string to_string(ParityClass parity)
{
    return parity == ParityClass::EvenIndex ? "even-index" : "odd-index";
}

} // namespace diracsol
