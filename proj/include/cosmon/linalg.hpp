#pragma once
#include <complex>
#include <vector>

namespace cosmon {

using cplx = std::complex<double>;

// Dense complex LU with partial pivoting (row-major storage).
class DenseLU {
public:
    explicit DenseLU(std::vector<cplx> a, int n); // factors in place, throws on exact singularity

    void solve_inplace(std::vector<cplx>& b) const;
    std::vector<cplx> solve(std::vector<cplx> b) const { solve_inplace(b); return b; }

    // crude conditioning proxy: max|U_ii| / min|U_ii|
    double diag_ratio() const;

private:
    int n_;
    std::vector<cplx> lu_;
    std::vector<int> piv_;
};

// General banded matrix with kl sub- and ku super-diagonals, LAPACK-style band
// storage with kl extra rows for pivoting fill-in.  Entries are real.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    double& at(int i, int j);      // valid for |i-j| within band
    double get(int i, int j) const;

    int n() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }

    std::vector<double> matvec(const std::vector<double>& x) const;
    std::vector<cplx> matvec(const std::vector<cplx>& x) const;

private:
    friend class BandedLU;
    int n_, kl_, ku_;
    std::vector<double> ab_; // (2kl+ku+1) x n, column j holds band column j
    int ldab_;
};

// LU factorization of a BandedMatrix with partial pivoting (dgbtrf-style).
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& a); // throws on exact singularity

    void solve_inplace(std::vector<cplx>& b) const;
    void solve_inplace(std::vector<double>& b) const;
    double min_pivot() const { return min_pivot_; }

private:
    int n_, kl_, ku_;
    std::vector<double> ab_;
    std::vector<int> piv_;
    int ldab_;
    double min_pivot_;

    template <typename T> void solve_impl(std::vector<T>& b) const;
};

} // namespace cosmon
