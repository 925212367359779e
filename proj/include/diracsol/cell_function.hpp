#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "diracsol/bloch.hpp"
#include "diracsol/potential.hpp"

namespace diracsol {

/// f(x) = e^{i pi x} sum_{|m|<=M} c_m e^{2 pi i m x}, i.e. a function with f(x+1) = -f(x),
/// stored by its Fourier coefficients.
class CellFunction
{
  private:
    Eigen::VectorXcd c_;

  public:
    CellFunction() = default;

    explicit CellFunction(Eigen::VectorXcd coeffs);

    static CellFunction zero(FourierCutoff const& cut);

    Eigen::VectorXcd const& coeffs() const
    {
        return c_;
    }

    int M() const
    {
        return static_cast<int>(c_.size() - 1) / 2;
    }

    FourierCutoff cutoff() const
    {
        return {M()};
    }

    std::complex<double> coeff(int m) const
    {
        return (m >= -M() && m <= M()) ? c_(m + M()) : 0.0;
    }

    std::complex<double> operator()(double x) const;

    CellFunction derivative() const;

    /// P * f for a cosine series P; indices that leave the cutoff are dropped.
    CellFunction times(CosineSeries const& pot) const;

    /// Coefficients reindexed by m -> -m-1, which maps f(x) to f(-x).
    CellFunction reflected() const;

    /// x -> conj(f(x)); also uses the m -> -m-1 reindexing.
    CellFunction conjugated() const;

    double norm() const
    {
        return c_.norm();
    }

    CellFunction& operator+=(CellFunction const& o);
    CellFunction& operator-=(CellFunction const& o);
    CellFunction& operator*=(std::complex<double> a);
};

CellFunction operator+(CellFunction a, CellFunction const& b);
CellFunction operator-(CellFunction a, CellFunction const& b);
CellFunction operator*(std::complex<double> s, CellFunction a);

/// Cell L2 inner product <f, g> = int_0^1 f conj(g).
std::complex<double> inner(CellFunction const& f, CellFunction const& g);

/// f * g * conj(h), truncated to the common cutoff.
CellFunction cubic_product(CellFunction const& f, CellFunction const& g, CellFunction const& h);

/// Evaluates several cell functions at the same points, sharing the plane-wave
/// powers. Coefficients below 1e-18 of the largest one are skipped.
class CellEvaluator
{
  private:
    int m_lo_{0};
    int m_hi_{-1};
    std::vector<Eigen::VectorXcd> rows_;

  public:
    explicit CellEvaluator(std::vector<CellFunction> const& fns);

    std::size_t count() const
    {
        return rows_.size();
    }

    /// out[j] = f_j(x).
    void evaluate(double x, std::span<std::complex<double>> out) const;
};

} // namespace diracsol
