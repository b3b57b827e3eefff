#include "cosmon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cosmon {

DenseLU::DenseLU(std::vector<cplx> a, int n) : n_(n), lu_(std::move(a)), piv_(n) {
    if (static_cast<int>(lu_.size()) != n * n)
        throw std::invalid_argument("DenseLU: size mismatch");
    for (int k = 0; k < n_; ++k) {
        int p = k;
        double best = std::abs(lu_[k * n_ + k]);
        for (int i = k + 1; i < n_; ++i) {
            const double v = std::abs(lu_[i * n_ + k]);
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) throw std::runtime_error("DenseLU: singular matrix");
        piv_[k] = p;
        if (p != k)
            for (int j = 0; j < n_; ++j) std::swap(lu_[k * n_ + j], lu_[p * n_ + j]);
        const cplx inv_piv = 1.0 / lu_[k * n_ + k];
        for (int i = k + 1; i < n_; ++i) {
            const cplx m = lu_[i * n_ + k] * inv_piv;
            lu_[i * n_ + k] = m;
            if (m != cplx(0.0, 0.0)) {
                const cplx* __restrict rk = &lu_[k * n_];
                cplx* __restrict ri = &lu_[i * n_];
                for (int j = k + 1; j < n_; ++j) ri[j] -= m * rk[j];
            }
        }
    }
}

void DenseLU::solve_inplace(std::vector<cplx>& b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("DenseLU::solve: size");
    // rows were swapped in full during factorization: permute first, then subst
    for (int k = 0; k < n_; ++k)
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    for (int k = 0; k < n_; ++k) {
        const cplx bk = b[k];
        if (bk != cplx(0.0, 0.0))
            for (int i = k + 1; i < n_; ++i) b[i] -= lu_[i * n_ + k] * bk;
    }
    for (int i = n_ - 1; i >= 0; --i) {
        cplx s = b[i];
        const cplx* __restrict ri = &lu_[i * n_];
        for (int j = i + 1; j < n_; ++j) s -= ri[j] * b[j];
        b[i] = s / ri[i];
    }
}

double DenseLU::diag_ratio() const {
    double lo = std::abs(lu_[0]), hi = lo;
    for (int i = 0; i < n_; ++i) {
        const double v = std::abs(lu_[i * n_ + i]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
}

double& BandedMatrix::at(int i, int j) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > ku_)
        throw std::out_of_range("BandedMatrix::at outside band");
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

double BandedMatrix::get(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > ku_) return 0.0;
    return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

std::vector<double> BandedMatrix::matvec(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<cplx> BandedMatrix::matvec(const std::vector<cplx>& x) const {
    std::vector<cplx> y(n_, cplx(0.0, 0.0));
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
        cplx s(0.0, 0.0);
        for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.n_), kl_(a.kl_), ku_(a.ku_), ab_(a.ab_), piv_(a.n_), ldab_(a.ldab_) {
    // dgbtrf-style factorization: U occupies rows [0, kl+ku], L multipliers below.
    const int kv = kl_ + ku_; // upper bandwidth after pivoting
    min_pivot_ = std::numeric_limits<double>::infinity();
    auto AB = [&](int band_row, int col) -> double& {
        return ab_[static_cast<std::size_t>(col) * ldab_ + band_row];
    };
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j); // rows below diagonal in column j
        int p = 0;
        double best = std::abs(AB(kv, j));
        for (int i = 1; i <= km; ++i) {
            const double v = std::abs(AB(kv + i, j));
            if (v > best) { best = v; p = i; }
        }
        piv_[j] = j + p;
        if (best == 0.0) throw std::runtime_error("BandedLU: singular matrix");
        min_pivot_ = std::min(min_pivot_, best);
        const int ju = std::min(j + kv, n_ - 1); // last column touched by row j
        if (p != 0) {
            for (int c = j; c <= ju; ++c)
                std::swap(AB(kv + p - (c - j), c), AB(kv - (c - j), c));
        }
        const double d = AB(kv, j);
        for (int i = 1; i <= km; ++i) AB(kv + i, j) /= d;
        for (int c = j + 1; c <= ju; ++c) {
            const double ujc = AB(kv - (c - j), c);
            if (ujc != 0.0)
                for (int i = 1; i <= km; ++i)
                    AB(kv + i - (c - j), c) -= AB(kv + i, j) * ujc;
        }
    }
}

template <typename T>
void BandedLU::solve_impl(std::vector<T>& b) const {
    if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedLU::solve: size");
    const int kv = kl_ + ku_;
    auto AB = [&](int band_row, int col) -> double {
        return ab_[static_cast<std::size_t>(col) * ldab_ + band_row];
    };
    for (int j = 0; j < n_; ++j) {
        if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
        const T bj = b[j];
        const int km = std::min(kl_, n_ - 1 - j);
        for (int i = 1; i <= km; ++i) b[j + i] -= AB(kv + i, j) * bj;
    }
    for (int i = n_ - 1; i >= 0; --i) {
        T s = b[i];
        const int j1 = std::min(n_ - 1, i + kv);
        for (int j = i + 1; j <= j1; ++j) s -= AB(kv - (j - i), j) * b[j];
        b[i] = s / AB(kv, i);
    }
}

void BandedLU::solve_inplace(std::vector<cplx>& b) const { solve_impl(b); }
void BandedLU::solve_inplace(std::vector<double>& b) const { solve_impl(b); }

} // namespace cosmon
