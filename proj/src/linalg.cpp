#include "xbar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "xbar/errors.hpp"

namespace xbar {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1),
      a_(static_cast<std::size_t>(width_) * n, 0.0), ipiv_(n, 0) {}

void BandedMatrix::clear() {
    std::fill(a_.begin(), a_.end(), 0.0);
}

double& BandedMatrix::at(int i, int j) {
    return a_[static_cast<std::size_t>(kl_ + ku_ + i - j) * n_ + j];
}

void BandedMatrix::solve_in_place(std::vector<double>& rhs) {
    const int band = ku_ + kl_;  // working upper bandwidth including fill-in

    for (int j = 0; j < n_; ++j) {
        const int last_row = std::min(n_ - 1, j + kl_);
        int piv = j;
        double piv_abs = std::fabs(at(j, j));
        for (int i = j + 1; i <= last_row; ++i) {
            const double v = std::fabs(at(i, j));
            if (v > piv_abs) {
                piv_abs = v;
                piv = i;
            }
        }
        if (piv_abs == 0.0)
            throw SingularJacobianError("banded LU: zero pivot column " + std::to_string(j));
        ipiv_[j] = piv;

        if (piv != j) {
            const int last_col = std::min(n_ - 1, j + band);
            for (int k = j; k <= last_col; ++k) std::swap(at(j, k), at(piv, k));
        }

        const double d = at(j, j);
        const int last_col = std::min(n_ - 1, j + band);
        for (int i = j + 1; i <= last_row; ++i) {
            const double l = at(i, j) / d;
            at(i, j) = l;
            if (l != 0.0)
                for (int k = j + 1; k <= last_col; ++k) at(i, k) -= l * at(j, k);
        }
    }

    // forward substitution interleaved with the recorded row swaps
    for (int j = 0; j < n_; ++j) {
        if (ipiv_[j] != j) std::swap(rhs[j], rhs[ipiv_[j]]);
        const int last_row = std::min(n_ - 1, j + kl_);
        for (int i = j + 1; i <= last_row; ++i) rhs[i] -= at(i, j) * rhs[j];
    }

    // back substitution over the widened upper band
    for (int j = n_ - 1; j >= 0; --j) {
        rhs[j] /= at(j, j);
        const int first_row = std::max(0, j - band);
        for (int i = first_row; i < j; ++i) rhs[i] -= at(i, j) * rhs[j];
    }
}

void dense_solve_in_place(std::vector<double>& a, std::vector<double>& rhs, int n) {
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * n + j];
    };

    std::vector<int> ipiv(n);
    for (int j = 0; j < n; ++j) {
        int piv = j;
        double piv_abs = std::fabs(at(j, j));
        for (int i = j + 1; i < n; ++i) {
            const double v = std::fabs(at(i, j));
            if (v > piv_abs) {
                piv_abs = v;
                piv = i;
            }
        }
        if (piv_abs == 0.0)
            throw SingularJacobianError("dense LU: zero pivot column " + std::to_string(j));
        ipiv[j] = piv;
        if (piv != j)
            for (int k = 0; k < n; ++k) std::swap(at(j, k), at(piv, k));

        const double d = at(j, j);
        for (int i = j + 1; i < n; ++i) {
            const double l = at(i, j) / d;
            at(i, j) = l;
            if (l != 0.0)
                for (int k = j + 1; k < n; ++k) at(i, k) -= l * at(j, k);
        }
    }

    for (int j = 0; j < n; ++j) {
        if (ipiv[j] != j) std::swap(rhs[j], rhs[ipiv[j]]);
        for (int i = j + 1; i < n; ++i) rhs[i] -= at(i, j) * rhs[j];
    }
    for (int j = n - 1; j >= 0; --j) {
        rhs[j] /= at(j, j);
        for (int i = 0; i < j; ++i) rhs[i] -= at(i, j) * rhs[j];
    }
}

}  // namespace xbar
