#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace swarmkit {

// Tridiagonal system with sub-diagonal `lower` (lower[0] unused), diagonal
// `diag` and super-diagonal `upper` (upper[n-1] unused).
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    void resize(std::size_t n) {
        lower.assign(n, 0.0);
        diag.assign(n, 0.0);
        upper.assign(n, 0.0);
    }

    std::size_t size() const { return diag.size(); }

    // Weak diagonal dominance by rows or by columns.
    bool diagonally_dominant() const {
        const std::size_t n = diag.size();
        bool rows = true;
        bool cols = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double off_row = (i > 0 ? std::abs(lower[i]) : 0.0) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
            const double off_col = (i > 0 ? std::abs(upper[i - 1]) : 0.0) + (i + 1 < n ? std::abs(lower[i + 1]) : 0.0);
            const double dii = std::abs(diag[i]);
            if (dii < off_row) rows = false;
            if (dii < off_col) cols = false;
        }
        return rows || cols;
    }

    // Thomas algorithm; `rhs` is overwritten with the solution.
    void solve(std::span<double> rhs, std::vector<double>& scratch) const {
        const std::size_t n = diag.size();
        scratch.resize(n);
        double pivot = diag[0];
        if (pivot == 0.0) throw std::domain_error("singular tridiagonal system");
        rhs[0] /= pivot;
        for (std::size_t i = 1; i < n; ++i) {
            scratch[i] = upper[i - 1] / pivot;
            pivot = diag[i] - lower[i] * scratch[i];
            if (pivot == 0.0 || !std::isfinite(pivot)) throw std::domain_error("singular tridiagonal system");
            rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
        }
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
};

}  // namespace swarmkit
