#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace diracsol {

enum class ParityClass
{
    EvenIndex,
    OddIndex
};

/// Index -> amplitude of a cosine series sum_m a_m cos(2 pi m x).
using CosineSeries = std::map<int, double>;

/// Finite cosine series whose indices are all even or all odd.
class PeriodicPotential
{
  private:
    CosineSeries coeffs_;
    ParityClass parity_{ParityClass::EvenIndex};

  public:
    PeriodicPotential() = default;

    /// Zero amplitudes are dropped; throws ValidationError on a parity mismatch,
    /// a non-positive index or a non-finite amplitude.
    PeriodicPotential(CosineSeries coeffs, ParityClass parity);

    static PeriodicPotential from_pairs(std::vector<std::pair<int, double>> const& pairs, ParityClass parity);

    CosineSeries const& coeffs() const
    {
        return coeffs_;
    }

    ParityClass parity() const
    {
        return parity_;
    }

    bool is_zero() const
    {
        return coeffs_.empty();
    }

    /// Largest index with a nonzero amplitude (0 for the zero potential).
    int max_index() const;

    double operator()(double x) const;

    /// sum |a_m|, an upper bound for the sup norm.
    double sup_bound() const;

    std::vector<std::pair<int, double>> pairs() const;
};

/// Cosine series of V + delta * W.
CosineSeries combine(PeriodicPotential const& V, PeriodicPotential const& W, double delta);

double evaluate(CosineSeries const& series, double x);

inline int max_index(CosineSeries const& series)
{
    return series.empty() ? 0 : series.rbegin()->first;
}

std::string to_string(ParityClass parity);

} // namespace diracsol
