#include <limits>
#include <stdexcept>
#include <vector>

#include "mflab/transport.hpp"

namespace mflab {

// Dense Jonker-Volgenant shortest augmenting path algorithm
// ("A Shortest Augmenting Path Algorithm for Dense and Sparse Linear
//  Assignment Problems", Computing 38, 1987).
AssignmentResult solve_assignment(const std::vector<double>& cost, int n) {
    if (n <= 0 || cost.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("solve_assignment: bad matrix shape");
    const double inf = std::numeric_limits<double>::infinity();
    auto c = [&](int i, int j) { return cost[static_cast<std::size_t>(i) * n + j]; };

    std::vector<int> rowsol(n, -1), colsol(n, -1);
    std::vector<double> u(n, 0.0), v(n, 0.0);
    std::vector<int> freerow(n, 0), collist(n, 0), matches(n, 0), pred(n, 0);
    std::vector<double> d(n, 0.0);
    int numfree = 0;

    // Column reduction, reverse order.
    for (int j = n - 1; j >= 0; --j) {
        double min = c(0, j);
        int imin = 0;
        for (int i = 1; i < n; ++i)
            if (c(i, j) < min) {
                min = c(i, j);
                imin = i;
            }
        v[j] = min;
        if (++matches[imin] == 1) {
            rowsol[imin] = j;
            colsol[j] = imin;
        } else {
            colsol[j] = -1;
        }
    }

    // Reduction transfer.
    for (int i = 0; i < n; ++i) {
        if (matches[i] == 0) {
            freerow[numfree++] = i;
        } else if (matches[i] == 1) {
            const int j1 = rowsol[i];
            double min = inf;
            for (int j = 0; j < n; ++j)
                if (j != j1 && c(i, j) - v[j] < min) min = c(i, j) - v[j];
            v[j1] -= min;
        }
    }

    // Augmenting row reduction, two sweeps.
    for (int loop = 0; loop < 2; ++loop) {
        int k = 0;
        const int prvnumfree = numfree;
        numfree = 0;
        while (k < prvnumfree) {
            const int i = freerow[k++];
            double umin = c(i, 0) - v[0], usubmin = inf;
            int j1 = 0, j2 = -1;
            for (int j = 1; j < n; ++j) {
                const double h = c(i, j) - v[j];
                if (h < usubmin) {
                    if (h >= umin) {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        j2 = j1;
                        umin = h;
                        j1 = j;
                    }
                }
            }
            int i0 = colsol[j1];
            if (umin < usubmin) {
                v[j1] -= usubmin - umin;
            } else if (i0 >= 0) {
                j1 = j2;
                i0 = colsol[j1];
            }
            rowsol[i] = j1;
            colsol[j1] = i;
            if (i0 >= 0) {
                if (umin < usubmin)
                    freerow[--k] = i0;
                else
                    freerow[numfree++] = i0;
            }
        }
    }

    // Augmentation for the remaining free rows.
    for (int f = 0; f < numfree; ++f) {
        const int freerow_i = freerow[f];
        for (int j = 0; j < n; ++j) {
            d[j] = c(freerow_i, j) - v[j];
            pred[j] = freerow_i;
            collist[j] = j;
        }
        int low = 0, up = 0, last = -1, endofpath = -1;
        double min = inf;
        bool unassignedfound = false;
        do {
            if (up == low) {
                last = low - 1;
                min = d[collist[up++]];
                for (int k = up; k < n; ++k) {
                    const int j = collist[k];
                    const double h = d[j];
                    if (h <= min) {
                        if (h < min) {
                            up = low;
                            min = h;
                        }
                        collist[k] = collist[up];
                        collist[up++] = j;
                    }
                }
                for (int k = low; k < up; ++k)
                    if (colsol[collist[k]] < 0) {
                        endofpath = collist[k];
                        unassignedfound = true;
                        break;
                    }
            }
            if (!unassignedfound) {
                const int j1 = collist[low++];
                const int i = colsol[j1];
                const double u1 = c(i, j1) - v[j1] - min;
                for (int k = up; k < n; ++k) {
                    const int j = collist[k];
                    const double h = c(i, j) - v[j] - u1;
                    if (h < d[j]) {
                        d[j] = h;
                        pred[j] = i;
                        if (h == min) {
                            if (colsol[j] < 0) {
                                endofpath = j;
                                unassignedfound = true;
                                break;
                            }
                            collist[k] = collist[up];
                            collist[up++] = j;
                        }
                    }
                }
            }
        } while (!unassignedfound);

        for (int k = 0; k <= last; ++k) {
            const int j1 = collist[k];
            v[j1] += d[j1] - min;
        }

        int i;
        do {
            i = pred[endofpath];
            colsol[endofpath] = i;
            const int j1 = endofpath;
            endofpath = rowsol[i];
            rowsol[i] = j1;
        } while (i != freerow_i);
    }

    AssignmentResult res;
    res.row_to_col = rowsol;
    res.col_duals = v;
    res.row_duals.resize(n);
    res.total_cost = 0.0;
    for (int i = 0; i < n; ++i) {
        const int j = rowsol[i];
        res.row_duals[i] = c(i, j) - v[j];
        res.total_cost += c(i, j);
    }
    return res;
}

}  // namespace mflab
