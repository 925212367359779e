#include "diracsol/cell_function.hpp"

#include <cmath>
#include <numbers>

#include "diracsol/errors.hpp"

namespace diracsol {

namespace {

constexpr double pi = std::numbers::pi;

void require_same_cutoff(CellFunction const& a, CellFunction const& b)
{
    if (a.coeffs().size() != b.coeffs().size()) {
        throw ValidationError("cell functions use different Fourier cutoffs");
    }
}

} // namespace

CellFunction::CellFunction(Eigen::VectorXcd coeffs)
    : c_(std::move(coeffs))
{
    if (c_.size() % 2 == 0 || c_.size() == 0) {
        throw ValidationError("a coefficient vector must have odd length 2M+1");
    }
}

CellFunction CellFunction::zero(FourierCutoff const& cut)
{
    return CellFunction(Eigen::VectorXcd::Zero(cut.size()));
}

std::complex<double> CellFunction::operator()(double x) const
{
    std::complex<double> v;
    CellEvaluator({*this}).evaluate(x, {&v, 1});
    return v;
}

CellFunction CellFunction::derivative() const
{
    Eigen::VectorXcd d(c_.size());
    for (int m = -M(); m <= M(); ++m) {
        d(m + M()) = std::complex<double>(0, 2 * pi * m + pi) * c_(m + M());
    }
    return CellFunction(std::move(d));
}

CellFunction CellFunction::times(CosineSeries const& pot) const
{
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(c_.size());
    for (auto const& [j, amp] : pot) {
        for (int n = -M(); n <= M(); ++n) {
            out(n + M()) += 0.5 * amp * (coeff(n - j) + coeff(n + j));
        }
    }
    return CellFunction(std::move(out));
}

CellFunction CellFunction::reflected() const
{
    Eigen::VectorXcd out(c_.size());
    for (int n = -M(); n <= M(); ++n) {
        out(n + M()) = coeff(-n - 1);
    }
    return CellFunction(std::move(out));
}

CellFunction CellFunction::conjugated() const
{
    Eigen::VectorXcd out(c_.size());
    for (int n = -M(); n <= M(); ++n) {
        out(n + M()) = std::conj(coeff(-n - 1));
    }
    return CellFunction(std::move(out));
}

CellFunction& CellFunction::operator+=(CellFunction const& o)
{
    require_same_cutoff(*this, o);
    c_ += o.c_;
    return *this;
}

CellFunction& CellFunction::operator-=(CellFunction const& o)
{
    require_same_cutoff(*this, o);
    c_ -= o.c_;
    return *this;
}

CellFunction& CellFunction::operator*=(std::complex<double> a)
{
    c_ *= a;
    return *this;
}

CellFunction operator+(CellFunction a, CellFunction const& b)
{
    return a += b;
}

CellFunction operator-(CellFunction a, CellFunction const& b)
{
    return a -= b;
}

CellFunction operator*(std::complex<double> s, CellFunction a)
{
    return a *= s;
}

std::complex<double> inner(CellFunction const& f, CellFunction const& g)
{
    return cell_inner_product(f.coeffs(), g.coeffs());
}

CellFunction cubic_product(CellFunction const& f, CellFunction const& g, CellFunction const& h)
{
    require_same_cutoff(f, g);
    require_same_cutoff(f, h);
    int M = f.M();
    // f g = e^{2 pi i x} sum_j s_j e^{2 pi i j x}, |j| <= 2M
    std::vector<std::complex<double>> s(4 * M + 1);
    for (int a = -M; a <= M; ++a) {
        auto fa = f.coeffs()(a + M);
        if (fa == 0.0) {
            continue;
        }
        for (int b = -M; b <= M; ++b) {
            s[a + b + 2 * M] += fa * g.coeffs()(b + M);
        }
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * M + 1);
    for (int n = -M; n <= M; ++n) {
        std::complex<double> acc{0};
        for (int c = -M; c <= M; ++c) {
            int j = n + c;
            if (j >= -2 * M && j <= 2 * M) {
                acc += s[j + 2 * M] * std::conj(h.coeffs()(c + M));
            }
        }
        out(n + M) = acc;
    }
    return CellFunction(std::move(out));
}

CellEvaluator::CellEvaluator(std::vector<CellFunction> const& fns)
{
    if (fns.empty()) {
        return;
    }
    int M       = fns.front().M();
    double cmax = 0;
    for (auto const& f : fns) {
        if (f.M() != M) {
            throw ValidationError("cell functions use different Fourier cutoffs");
        }
        cmax = std::max(cmax, f.coeffs().cwiseAbs().maxCoeff());
    }
    double floor = 1e-18 * cmax;
    m_lo_        = M + 1;
    m_hi_        = -M - 1;
    for (auto const& f : fns) {
        for (int m = -M; m <= M; ++m) {
            if (std::abs(f.coeffs()(m + M)) > floor) {
                m_lo_ = std::min(m_lo_, m);
                m_hi_ = std::max(m_hi_, m);
            }
        }
    }
    if (m_lo_ > m_hi_) {
        m_lo_ = 0;
        m_hi_ = -1;
    }
    for (auto const& f : fns) {
        rows_.push_back(f.coeffs().segment(m_lo_ + M, m_hi_ - m_lo_ + 1));
    }
}

void CellEvaluator::evaluate(double x, std::span<std::complex<double>> out) const
{
    for (auto& o : out) {
        o = 0.0;
    }
    if (m_lo_ > m_hi_) {
        return;
    }
    // f(x + 2) = f(x); reducing keeps the phases small
    double xr  = x - 2 * std::floor(0.5 * x);
    auto wave  = std::polar(1.0, (2 * pi * m_lo_ + pi) * xr);
    auto step  = std::polar(1.0, 2 * pi * xr);
    int nmodes = m_hi_ - m_lo_ + 1;
    for (int i = 0; i < nmodes; ++i) {
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            out[j] += rows_[j](i) * wave;
        }
        wave *= step;
    }
}

} // namespace diracsol
