#pragma once

#include <vector>

namespace xbar {

// Band matrix in LAPACK-style packed storage: entry (i, j) lives at band row
// kl + ku + i - j. The extra kl rows on top hold fill-in created by partial
// pivoting, so factorization never leaves the allocation.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    void clear();
    double& at(int i, int j);

    // Factors in place with partial pivoting and overwrites rhs with the
    // solution. Throws SingularJacobianError on an exactly zero pivot.
    void solve_in_place(std::vector<double>& rhs);

    int size() const { return n_; }

private:
    int n_, kl_, ku_, width_;
    std::vector<double> a_;
    std::vector<int> ipiv_;
};

// Dense LU with partial pivoting; a deliberately separate code path used by
// the verification oracle. a is row-major n*n and is destroyed.
void dense_solve_in_place(std::vector<double>& a, std::vector<double>& rhs, int n);

}  // namespace xbar
