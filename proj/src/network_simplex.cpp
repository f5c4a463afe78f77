#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mflab/transport.hpp"

namespace mflab {

namespace {

// Primal network simplex specialized to the dense bipartite transportation
// problem.  Arcs are implicit (every source-sink pair); per-node state only,
// so memory stays O(n + m) plus the caller's cost matrix.
class TransportSimplex {
  public:
    TransportSimplex(const std::vector<double>& cost, int n, int m,
                     std::vector<double> supply, std::vector<double> demand)
        : c_(cost), n_(n), m_(m), a_(std::move(supply)), b_(std::move(demand)) {
        nv_ = n_ + m_ + 1;
        root_ = n_ + m_;
        parent_.assign(nv_, root_);
        pred_up_.assign(nv_, false);
        flow_.assign(nv_, 0.0);
        pi_.assign(nv_, 0.0);
        depth_.assign(nv_, 1);
        pred_real_.assign(nv_, -1);
        first_child_.assign(nv_, -1);
        next_sib_.assign(nv_, -1);
        prev_sib_.assign(nv_, -1);

        double maxc = 0.0;
        for (double v : c_) maxc = std::max(maxc, std::abs(v));
        big_ = (maxc + 1.0) * (nv_ + 1);
        tol_ = 1e-11 * (maxc + 1.0);

        depth_[root_] = 0;
        parent_[root_] = -1;
        for (int v = 0; v < nv_ - 1; ++v) attach(v, root_);
        for (int i = 0; i < n_; ++i) {
            pred_up_[i] = true;  // artificial arc i -> root
            flow_[i] = a_[i];
            pi_[i] = -big_;
        }
        for (int j = 0; j < m_; ++j) {
            const int v = n_ + j;
            pred_up_[v] = false;  // artificial arc root -> sink
            flow_[v] = b_[j];
            pi_[v] = big_;
        }
        block_ = std::max<long>(64, static_cast<long>(std::sqrt(static_cast<double>(n_) * m_)));
        stack_.reserve(nv_);
    }

    TransportationResult run() {
        const long total = static_cast<long>(n_) * m_;
        const long max_pivots = 1000L * nv_ + 100000L;
        long pivots = 0;
        while (true) {
            const long e = find_entering(total);
            if (e < 0) break;
            pivot(e);
            if (++pivots > max_pivots)
                throw std::runtime_error("network simplex: pivot limit exceeded");
        }
        return collect();
    }

  private:
    void attach(int v, int p) {
        parent_[v] = p;
        prev_sib_[v] = -1;
        next_sib_[v] = first_child_[p];
        if (first_child_[p] >= 0) prev_sib_[first_child_[p]] = v;
        first_child_[p] = v;
    }

    void detach(int v) {
        const int p = parent_[v];
        if (prev_sib_[v] >= 0)
            next_sib_[prev_sib_[v]] = next_sib_[v];
        else
            first_child_[p] = next_sib_[v];
        if (next_sib_[v] >= 0) prev_sib_[next_sib_[v]] = prev_sib_[v];
    }

    double reduced_cost(long e) const {
        const int i = static_cast<int>(e / m_);
        const int j = static_cast<int>(e % m_);
        return c_[e] + pi_[i] - pi_[n_ + j];
    }

    long find_entering(long total) {
        long scanned = 0;
        while (scanned < total) {
            long best = -1;
            double best_rc = -tol_;
            long e = cursor_;
            int i = static_cast<int>(e / m_);
            int j = static_cast<int>(e % m_);
            double pi_i = pi_[i];
            const long stop = std::min(block_, total - scanned);
            for (long s = 0; s < stop; ++s) {
                const double rc = c_[e] + pi_i - pi_[n_ + j];
                if (rc < best_rc) {
                    best_rc = rc;
                    best = e;
                }
                if (++j == m_) {
                    j = 0;
                    if (++i == n_) i = 0;
                    pi_i = pi_[i];
                    e = static_cast<long>(i) * m_;
                } else {
                    ++e;
                }
            }
            scanned += stop;
            cursor_ = e;
            if (best >= 0) return best;
        }
        return -1;
    }

    // Entering arc e = (u -> w), u source node, w sink node.
    void pivot(long e) {
        const int u = static_cast<int>(e / m_);
        const int w = n_ + static_cast<int>(e % m_);
        const double rc = c_[e] + pi_[u] - pi_[w];

        // Locate the apex and the leaving arc.  Cycle orientation: flow is
        // pushed from u through the entering arc into w, then back through
        // the tree from w to u.
        int x = u, y = w;
        double t = std::numeric_limits<double>::infinity();
        int leave = -1;     // node whose pred arc leaves the basis
        bool leave_on_u_side = false;
        auto consider_u_side = [&](int v) {
            // Traversal direction on the u-side path is parent -> v.
            if (pred_up_[v] && flow_[v] < t) {
                t = flow_[v];
                leave = v;
                leave_on_u_side = true;
            }
        };
        auto consider_w_side = [&](int v) {
            // Traversal direction on the w-side path is v -> parent.
            if (!pred_up_[v] && flow_[v] < t) {
                t = flow_[v];
                leave = v;
                leave_on_u_side = false;
            }
        };
        while (depth_[x] > depth_[y]) {
            consider_u_side(x);
            x = parent_[x];
        }
        while (depth_[y] > depth_[x]) {
            consider_w_side(y);
            y = parent_[y];
        }
        while (x != y) {
            consider_u_side(x);
            consider_w_side(y);
            x = parent_[x];
            y = parent_[y];
        }

        // Apply the flow change along both paths.
        for (int v = u; v != x; v = parent_[v]) flow_[v] += pred_up_[v] ? -t : t;
        for (int v = w; v != x; v = parent_[v]) flow_[v] += pred_up_[v] ? t : -t;

        // Re-hang the subtree cut off by the leaving arc.
        const int q = leave_on_u_side ? u : w;
        const int o = leave_on_u_side ? w : u;
        const double delta = leave_on_u_side ? -rc : rc;

        int cur = q;
        int new_parent = o;
        long new_real = e;
        bool new_up = leave_on_u_side;  // q == u means arc directed q -> parent
        double new_flow = t;
        while (true) {
            const int old_parent = parent_[cur];
            const long old_real = pred_real_[cur];
            const bool old_up = pred_up_[cur];
            const double old_flow = flow_[cur];
            detach(cur);
            attach(cur, new_parent);
            pred_real_[cur] = new_real;
            pred_up_[cur] = new_up;
            flow_[cur] = new_flow;
            if (cur == leave) break;
            new_parent = cur;
            new_real = old_real;
            new_up = !old_up;
            new_flow = old_flow;
            cur = old_parent;
        }

        // Shift potentials and refresh depths on the re-hung subtree.
        stack_.clear();
        stack_.push_back(q);
        while (!stack_.empty()) {
            const int v = stack_.back();
            stack_.pop_back();
            pi_[v] += delta;
            depth_[v] = depth_[parent_[v]] + 1;
            for (int ch = first_child_[v]; ch >= 0; ch = next_sib_[ch]) stack_.push_back(ch);
        }
    }

    TransportationResult collect() const {
        TransportationResult res;
        double total_supply = 0.0;
        for (double v : a_) total_supply += v;
        for (int v = 0; v < nv_ - 1; ++v) {
            if (pred_real_[v] < 0 && flow_[v] > 1e-7 * std::max(1.0, total_supply))
                throw std::runtime_error("network simplex: infeasible (artificial flow left)");
        }
        for (int v = 0; v < nv_ - 1; ++v) {
            if (pred_real_[v] >= 0 && flow_[v] > 0.0) {
                const long e = pred_real_[v];
                res.entries.push_back(
                    {static_cast<int>(e / m_), static_cast<int>(e % m_), flow_[v]});
            }
        }
        std::sort(res.entries.begin(), res.entries.end(), [](const PlanEntry& l, const PlanEntry& r) {
            return l.i != r.i ? l.i < r.i : l.j < r.j;
        });
        res.total_cost = 0.0;
        for (const auto& pe : res.entries)
            res.total_cost += pe.mass * c_[static_cast<long>(pe.i) * m_ + pe.j];
        const double shift = pi_[0];
        res.row_duals.resize(n_);
        res.col_duals.resize(m_);
        for (int i = 0; i < n_; ++i) res.row_duals[i] = shift - pi_[i];
        for (int j = 0; j < m_; ++j) res.col_duals[j] = pi_[n_ + j] - shift;
        return res;
    }

    const std::vector<double>& c_;
    int n_, m_, nv_, root_;
    std::vector<double> a_, b_;
    std::vector<int> parent_, depth_, first_child_, next_sib_, prev_sib_;
    std::vector<long> pred_real_;
    std::vector<bool> pred_up_;
    std::vector<double> flow_, pi_;
    double big_ = 0.0, tol_ = 0.0;
    long block_ = 64, cursor_ = 0;
    std::vector<int> stack_;
};

}  // namespace

TransportationResult solve_transportation(const std::vector<double>& cost, int n, int m,
                                          const std::vector<double>& supply,
                                          const std::vector<double>& demand) {
    if (n <= 0 || m <= 0 || cost.size() != static_cast<std::size_t>(n) * m)
        throw std::invalid_argument("solve_transportation: bad matrix shape");
    if (supply.size() != static_cast<std::size_t>(n) || demand.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("solve_transportation: bad margins");
    double sa = 0.0, sb = 0.0;
    for (double v : supply) {
        if (v < 0.0) throw std::invalid_argument("solve_transportation: negative supply");
        sa += v;
    }
    for (double v : demand) {
        if (v < 0.0) throw std::invalid_argument("solve_transportation: negative demand");
        sb += v;
    }
    if (std::abs(sa - sb) > 1e-9 * std::max(1.0, sa))
        throw std::invalid_argument("solve_transportation: unbalanced problem");

    // Absorb the fp imbalance into the largest demand so the tree flows
    // balance exactly.
    std::vector<double> b = demand;
    int jmax = 0;
    for (int j = 1; j < m; ++j)
        if (b[j] > b[jmax]) jmax = j;
    b[jmax] += sa - sb;

    TransportSimplex simplex(cost, n, m, supply, std::move(b));
    return simplex.run();
}

}  // namespace mflab
