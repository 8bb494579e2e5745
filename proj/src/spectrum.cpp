#include "ddbh/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ddbh/pool.hpp"

namespace ddbh {

namespace {

double condition_number(const Eigen::MatrixXcd& R) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R);
    const auto& s = svd.singularValues();
    const double smin = s[s.size() - 1];
    return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

void normalize_columns(Eigen::MatrixXcd& R) {
    for (int j = 0; j < R.cols(); ++j) {
        R.col(j).normalize();
        Eigen::Index imax = 0;
        R.col(j).cwiseAbs().maxCoeff(&imax);
        const cplx ph = R(imax, j) / std::abs(R(imax, j));
        R.col(j) /= ph;
    }
}

std::vector<std::vector<int>> clusters_of(const Eigen::VectorXcd& w, double tol) {
    const int n = static_cast<int>(w.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(w[i] - w[j]) < tol) parent[find(i)] = find(j);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [root, g] : groups)
        if (g.size() > 1) out.push_back(g);
    return out;
}

bool purely_imaginary(cplx w) { return std::abs(w.real()) < 1e-8; }

}  // namespace

double hopping_cos(const ModelParams& p, const Wavevector& k) {
    double s = 0.0;
    for (double ka : k) s += std::cos(ka);
    return 2.0 * p.J * s;
}

Eigen::MatrixXcd build_A_block(const NessResult& ness, const ModelParams& p, const Wavevector& k) {
    if (!ness.converged) throw InputError("fluctuation block needs a converged NESS");
    if (static_cast<int>(k.size()) != p.d) throw InputError("wavevector has the wrong number of components");
    return fluctuation_matrix(ness.c0, ness.omega0, p, hopping_cos(p, k));
}

Eigendecomposition diagonalize(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("diagonalize needs a square matrix");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
    if (es.info() != Eigen::Success) throw DegeneracyError("eigensolver did not converge", {});
    Eigendecomposition E;
    E.values = es.eigenvalues();
    E.right = es.eigenvectors();
    normalize_columns(E.right);
    E.condition = condition_number(E.right);

    if (E.condition > kDefectiveCondition) {
        const auto groups = clusters_of(E.values, kClusterTol);
        if (groups.empty()) {
            Eigen::MatrixXcd X = E.right.partialPivLu().inverse();
            const Eigen::VectorXd rn = X.rowwise().norm();
            std::vector<cplx> bad;
            for (int i = 0; i < rn.size(); ++i)
                if (rn[i] > 1e-3 * rn.maxCoeff()) bad.push_back(E.values[i]);
            throw DegeneracyError("near-defective matrix, condition " + std::to_string(E.condition), bad);
        }
        const double scale = std::max(1.0, A.norm());
        const int n = static_cast<int>(A.rows());
        for (const auto& g : groups) {
            cplx mean = 0.0;
            for (int i : g) mean += E.values[i];
            mean /= double(g.size());
            Eigen::MatrixXcd S = A;
            S.diagonal().array() -= mean;
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S, Eigen::ComputeFullV);
            const int m = static_cast<int>(g.size());
            std::vector<cplx> vals;
            for (int i : g) vals.push_back(E.values[i]);
            if (svd.singularValues()[n - m] > 1e-6 * scale)
                throw DegeneracyError("defective eigenvalue cluster", vals);
            for (int j = 0; j < m; ++j) E.right.col(g[j]) = svd.matrixV().col(n - m + j);
        }
        normalize_columns(E.right);
        E.condition = condition_number(E.right);
        E.cluster_fallback = true;
        if (E.condition > kDefectiveCondition) {
            std::vector<cplx> vals;
            for (const auto& g : groups)
                for (int i : g) vals.push_back(E.values[i]);
            throw DegeneracyError("defective matrix after cluster fallback", vals);
        }
    }
    E.left = E.right.partialPivLu().inverse();
    return E;
}

ModeWeights channel_weights(const Eigen::VectorXcd& u, const LocalBasis& b) {
    ModeWeights w;
    for (int n = 0; n <= b.n_max(); ++n) {
        for (int sg : {-1, 1}) {
            w.N += double(n) * u[b.flat_index(n, n, sg, sg)];
            if (n < b.n_max()) {
                const double f = std::sqrt(n + 1.0);
                w.U += f * u[b.flat_index(n + 1, n, sg, sg)];
                w.V += f * u[b.flat_index(n, n + 1, sg, sg)];
            }
        }
    }
    w.amp = 0.5 * (w.U + w.V);
    w.phase = (w.U - w.V) / cplx(0.0, 2.0);
    const double su = std::abs(w.U), sv = std::abs(w.V);
    w.C = su + sv > 0.0 ? (su - sv) / (su + sv) : 0.0;
    return w;
}

ModeSet mode_set(const NessResult& ness, const ModelParams& p, const Wavevector& k) {
    const Eigendecomposition E = diagonalize(build_A_block(ness, p, k));
    const LocalBasis& b = ness.c0.basis;
    ModeSet m;
    m.k = k;
    m.omega = E.values;
    m.right_u = E.right;
    m.left_x = E.left;
    m.condition = E.condition;
    double best = -1.0;
    for (int a = 0; a < m.size(); ++a) {
        m.weights.push_back(channel_weights(E.right.col(a), b));
        cplx tr = 0.0;
        for (int n = 0; n <= b.n_max(); ++n)
            for (int sg : {-1, 1}) tr += E.right(b.flat_index(n, n, sg, sg), a);
        if (std::abs(tr) > best) {
            best = std::abs(tr);
            m.trace_mode = a;
        }
    }
    return m;
}

std::vector<ModeSet> mode_sets(const NessResult& ness, const ModelParams& p, const std::vector<Wavevector>& path,
                               int workers) {
    std::vector<ModeSet> out(path.size());
    parallel_for(static_cast<int>(path.size()), workers, [&](int i) { out[i] = mode_set(ness, p, path[i]); });
    return out;
}

double pairing_defect(const Eigen::VectorXcd& w) {
    double worst = 0.0;
    for (int a = 0; a < w.size(); ++a) {
        double best = std::numeric_limits<double>::infinity();
        for (int b = 0; b < w.size(); ++b) best = std::min(best, std::abs(w[b] + std::conj(w[a])));
        worst = std::max(worst, best);
    }
    return worst;
}

double norm_k(const Wavevector& k) {
    double s = 0.0;
    for (double ka : k) s += ka * ka;
    return std::sqrt(s);
}

std::vector<Wavevector> diagonal_path(int d, int n, double k_max, double k_min) {
    std::vector<Wavevector> path;
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? k_min : k_min + (k_max - k_min) * i / (n - 1);
        path.emplace_back(d, t);
    }
    return path;
}

std::string BranchTable::label_of(int i, int mode) const {
    for (const auto& [label, idx] : band)
        if (idx[i] == mode) return label;
    return "local";
}

BranchTable classify_branches(const std::vector<ModeSet>& path, Phase phase, double min_overlap) {
    BranchTable t;
    const int P = static_cast<int>(path.size());
    if (P == 0) return t;
    double best_k = std::numeric_limits<double>::infinity();
    for (int i = 0; i < P; ++i) {
        const double kk = norm_k(path[i].k);
        if (phase == Phase::SFP && kk == 0.0 && P > 1) continue;
        if (kk < best_k) {
            best_k = kk;
            t.reference = i;
        }
    }
    auto assign = [&](int i) {
        const ModeSet& ref = path[i];
        std::vector<int> free;
        for (int a = 0; a < ref.size(); ++a)
            if (a != ref.trace_mode) free.push_back(a);
        auto take = [&](const std::string& label, auto pred, auto score) {
            int pick = -1;
            for (int a : free)
                if (pred(a) && (pick < 0 || score(a) > score(pick))) pick = a;
            if (pick < 0) return;
            if (!t.band.count(label)) t.band[label] = std::vector<int>(P, -1);
            t.band[label][i] = pick;
            free.erase(std::find(free.begin(), free.end(), pick));
        };
        auto damping_score = [&](int a) { return ref.omega[a].imag(); };
        auto imag_pred = [&](int a) { return purely_imaginary(ref.omega[a]); };
        if (phase == Phase::IP) {
            take("QP", [&](int a) { return std::abs(ref.weights[a].U) > std::abs(ref.weights[a].V); }, damping_score);
            take("QH", [&](int a) { return std::abs(ref.weights[a].V) > std::abs(ref.weights[a].U); }, damping_score);
        } else {
            // Ties between a +-Re pair go to Re > 0.
            auto least_damped = [&](int a) { return ref.omega[a].imag() + 1e-12 * std::tanh(ref.omega[a].real()); };
            take("G", [](int) { return true; }, least_damped);
            const cplx wg = ref.omega[t.band["G"][i]];
            if (purely_imaginary(wg)) {
                take("A", [](int) { return true; }, least_damped);
            } else {
                take("A", [](int) { return true; }, [&](int a) { return -std::abs(ref.omega[a] + std::conj(wg)); });
            }
        }
        take("D", imag_pred, damping_score);
    };
    assign(t.reference);
    // The SFP zero-k point sits on a Jordan block: label it directly.
    auto direct = [&](int i) { return phase == Phase::SFP && norm_k(path[i].k) == 0.0; };

    auto step = [&](int from, int to) {
        std::vector<std::tuple<double, std::string, int>> cand;
        // Left vectors are unreliable next to a Jordan block; compare right vectors there.
        const bool near_defective =
            path[from].condition > kNearDefectiveCondition || path[to].condition > kNearDefectiveCondition;
        for (auto& [label, idx] : t.band) {
            const Eigen::RowVectorXcd x = near_defective ? Eigen::RowVectorXcd(path[from].right_u.col(idx[from]).adjoint())
                                                         : Eigen::RowVectorXcd(path[from].left_x.row(idx[from]));
            for (int b = 0; b < path[to].size(); ++b) {
                if (b == path[to].trace_mode) continue;
                cand.emplace_back(std::abs((x * path[to].right_u.col(b))(0)), label, b);
            }
        }
        std::sort(cand.begin(), cand.end(), [](const auto& l, const auto& r) { return std::get<0>(l) > std::get<0>(r); });
        std::vector<bool> used(path[to].size(), false);
        int assigned = 0;
        for (const auto& [ov, label, b] : cand) {
            auto& idx = t.band[label];
            if (idx[to] >= 0 || used[b]) continue;
            if (ov < min_overlap) {
                std::ostringstream msg;
                msg << "branch " << label << " lost between path points " << from << " and " << to << " (overlap "
                    << ov << ")";
                throw TrackingError(msg.str(), from, to);
            }
            idx[to] = b;
            used[b] = true;
            if (++assigned == static_cast<int>(t.band.size())) break;
        }
    };
    for (int i = t.reference; i + 1 < P; ++i) direct(i + 1) ? assign(i + 1) : step(i, i + 1);
    for (int i = t.reference; i > 0; --i) direct(i - 1) ? assign(i - 1) : step(i, i - 1);
    std::vector<int> tr(P);
    for (int i = 0; i < P; ++i) tr[i] = path[i].trace_mode;
    t.band["trace"] = tr;
    return t;
}

StabilityReport stability_check(const std::vector<ModeSet>& sets, double zero_mode_tol) {
    StabilityReport r;
    r.max_im = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(sets.size()); ++i) {
        for (int a = 0; a < sets[i].size(); ++a) {
            if (a == sets[i].trace_mode) continue;
            if (sets[i].omega[a].imag() > r.max_im) {
                r.max_im = sets[i].omega[a].imag();
                r.k_index = i;
                r.mode = a;
            }
        }
    }
    r.stable = r.max_im <= zero_mode_tol;
    return r;
}

std::vector<int> diffusive_window(const std::vector<ModeSet>& path, const BranchTable& table) {
    std::vector<int> out;
    const auto it = table.band.find("G");
    if (it == table.band.end()) return out;
    auto inside = [&](int i) {
        const cplx w = path[i].omega[it->second[i]];
        return std::abs(w.real()) < 0.1 * std::abs(w.imag());
    };
    const int P = static_cast<int>(path.size());
    if (!inside(table.reference)) return out;
    int lo = table.reference, hi = table.reference;
    while (lo > 0 && inside(lo - 1)) --lo;
    while (hi + 1 < P && inside(hi + 1)) ++hi;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

}  // namespace ddbh
