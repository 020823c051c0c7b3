// SPDX-License-Identifier: Apache-2.0
//
// nfwpt: near-field wireless power transfer waveform and beam-focusing design
// Copyright (C) 2026 The nfwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nfwpt/socp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "nfwpt/power.hpp"

namespace nfwpt
{

// ============================================================ modelling layer

ConeProgram::ConeProgram(int dimension) : dim(dimension), linear(Eigen::VectorXd::Zero(dimension)) {}

double ConeProgram::objective(const Eigen::VectorXd &x) const
{
    double v = linear.dot(x);
    for (const auto &t : norms)
    {
        double acc = 0.0;
        for (int i : t.indices)
            acc += x(i) * x(i);
        v += t.scale * std::sqrt(acc);
    }
    double sq = 0.0;
    for (int i : squared_indices)
        sq += x(i) * x(i);
    return v + squared_weight * sq;
}

double ConeProgram::max_violation(const Eigen::VectorXd &x) const
{
    double worst = 0.0;
    for (const auto &r : affine_le)
        worst = std::max(worst, r.coeffs.dot(x) - r.rhs);
    for (const auto &b : balls)
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < b.indices.size(); ++k)
        {
            const double d = x(b.indices[k]) - b.center(static_cast<Eigen::Index>(k));
            acc += d * d;
        }
        worst = std::max(worst, std::sqrt(acc) - b.radius);
    }
    for (const auto &e : equalities)
        worst = std::max(worst, std::abs(e.coeffs.dot(x) - e.rhs));
    return worst;
}

void ConeProgram::check() const
{
    auto check_indices = [&](const std::vector<int> &idx, const char *what)
    {
        for (int i : idx)
            if (i < 0 || i >= dim)
                throw Error(std::string("cone program: ") + what + " index out of range");
    };
    if (linear.size() != dim)
        throw Error("cone program: linear objective has the wrong length");
    for (const auto &t : norms)
    {
        check_indices(t.indices, "norm term");
        if (!(t.scale >= 0.0))
            throw Error("cone program: norm scale must be non-negative");
    }
    check_indices(squared_indices, "squared term");
    if (!(squared_weight >= 0.0))
        throw Error("cone program: squared weight must be non-negative");
    for (const auto &r : affine_le)
        if (r.coeffs.size() != dim)
            throw Error("cone program: affine row has the wrong length");
    for (const auto &r : equalities)
        if (r.coeffs.size() != dim)
            throw Error("cone program: equality row has the wrong length");
    for (const auto &b : balls)
    {
        check_indices(b.indices, "ball");
        if (b.center.size() != static_cast<Eigen::Index>(b.indices.size()))
            throw Error("cone program: ball center has the wrong length");
        if (!(b.radius >= 0.0))
            throw Error("cone program: ball radius must be non-negative");
    }
}

std::string dump_program(const ConeProgram &p)
{
    std::ostringstream os;
    os << std::setprecision(17);
    auto put_idx = [&](const std::vector<int> &idx)
    {
        os << ' ' << idx.size();
        for (int i : idx)
            os << ' ' << i;
    };
    auto put_vec = [&](const Eigen::VectorXd &v)
    {
        for (Eigen::Index i = 0; i < v.size(); ++i)
            os << ' ' << v(i);
    };
    os << "nfwpt-cone-program 1\n";
    os << "dim " << p.dim << '\n';
    os << "linear";
    put_vec(p.linear);
    os << '\n';
    for (const auto &t : p.norms)
    {
        os << "norm " << t.scale;
        put_idx(t.indices);
        os << '\n';
    }
    if (!p.squared_indices.empty())
    {
        os << "squared " << p.squared_weight;
        put_idx(p.squared_indices);
        os << '\n';
    }
    for (const auto &r : p.affine_le)
    {
        os << "affine_le " << r.rhs;
        put_vec(r.coeffs);
        os << '\n';
    }
    for (const auto &b : p.balls)
    {
        os << "ball " << b.radius;
        put_idx(b.indices);
        put_vec(b.center);
        os << '\n';
    }
    for (const auto &r : p.equalities)
    {
        os << "equality " << r.rhs;
        put_vec(r.coeffs);
        os << '\n';
    }
    os << "end\n";
    return os.str();
}

ConeProgram parse_program(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    ConeProgram p;
    bool have_dim = false;
    auto fail = [&](const std::string &what) { throw ParseError("cone program: " + what, line_no); };
    auto read_idx = [&](std::istringstream &ls)
    {
        std::size_t k = 0;
        if (!(ls >> k))
            fail("missing index count");
        std::vector<int> idx(k);
        for (auto &i : idx)
            if (!(ls >> i))
                fail("missing index");
        return idx;
    };
    auto read_vec = [&](std::istringstream &ls, Eigen::Index n)
    {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            if (!(ls >> v(i)))
                fail("missing coefficient");
        return v;
    };
    while (std::getline(in, line))
    {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#')
            continue;
        if (key == "nfwpt-cone-program")
            continue;
        if (key == "end")
            break;
        if (key == "dim")
        {
            int d = 0;
            if (!(ls >> d) || d < 0)
                fail("bad dimension");
            p = ConeProgram(d);
            have_dim = true;
            continue;
        }
        if (!have_dim)
            fail("'dim' must come first");
        if (key == "linear")
            p.linear = read_vec(ls, p.dim);
        else if (key == "norm")
        {
            NormTerm t;
            if (!(ls >> t.scale))
                fail("missing scale");
            t.indices = read_idx(ls);
            p.norms.push_back(std::move(t));
        }
        else if (key == "squared")
        {
            if (!(ls >> p.squared_weight))
                fail("missing weight");
            p.squared_indices = read_idx(ls);
        }
        else if (key == "affine_le" || key == "equality")
        {
            AffineRow r;
            if (!(ls >> r.rhs))
                fail("missing right-hand side");
            r.coeffs = read_vec(ls, p.dim);
            (key == "affine_le" ? p.affine_le : p.equalities).push_back(std::move(r));
        }
        else if (key == "ball")
        {
            Ball b;
            if (!(ls >> b.radius))
                fail("missing radius");
            b.indices = read_idx(ls);
            b.center = read_vec(ls, static_cast<Eigen::Index>(b.indices.size()));
            p.balls.push_back(std::move(b));
        }
        else
            fail("unknown directive '" + key + "'");
    }
    p.check();
    return p;
}

// ============================================================ compilation

ConicForm compile(const ConeProgram &p)
{
    p.check();
    int n_t = 0;
    for (const auto &t : p.norms)
        if (t.scale > 0.0 && !t.indices.empty())
            ++n_t;
    const bool has_sq = p.squared_weight > 0.0 && !p.squared_indices.empty();
    const int n = p.dim + n_t + (has_sq ? 1 : 0);

    ConicForm f;
    f.program_dim = p.dim;
    f.c = Eigen::VectorXd::Zero(n);
    f.c.head(p.dim) = p.linear;

    int m = static_cast<int>(p.affine_le.size());
    f.orthant = m;
    for (const auto &t : p.norms)
        if (t.scale > 0.0 && !t.indices.empty())
        {
            f.soc.push_back(1 + static_cast<int>(t.indices.size()));
            m += f.soc.back();
        }
    if (has_sq)
    {
        f.soc.push_back(2 + static_cast<int>(p.squared_indices.size()));
        m += f.soc.back();
    }
    for (const auto &b : p.balls)
    {
        f.soc.push_back(1 + static_cast<int>(b.indices.size()));
        m += f.soc.back();
    }

    f.G = Eigen::MatrixXd::Zero(m, n);
    f.h = Eigen::VectorXd::Zero(m);
    int row = 0;
    for (const auto &r : p.affine_le)
    {
        f.G.row(row).head(p.dim) = r.coeffs.transpose();
        f.h(row) = r.rhs;
        ++row;
    }

    // norm epigraph ||x_idx|| <= t  as  s = (t, x_idx) in Q
    int col = p.dim;
    for (const auto &t : p.norms)
    {
        if (!(t.scale > 0.0) || t.indices.empty())
            continue;
        f.c(col) = t.scale;
        f.G(row++, col) = -1.0;
        for (int i : t.indices)
            f.G(row++, i) = -1.0;
        ++col;
    }

    // ||x_idx||^2 <= u  as the rotated cone ||(2 x_idx, u - 1)|| <= u + 1
    if (has_sq)
    {
        f.c(col) = p.squared_weight;
        f.G(row, col) = -1.0;
        f.h(row) = 1.0;
        ++row;
        f.G(row, col) = -1.0;
        f.h(row) = -1.0;
        ++row;
        for (int i : p.squared_indices)
            f.G(row++, i) = -2.0;
        ++col;
    }

    // ||x_idx - center|| <= radius  as  s = (radius, x_idx - center)
    for (const auto &b : p.balls)
    {
        f.h(row++) = b.radius;
        for (std::size_t k = 0; k < b.indices.size(); ++k)
        {
            f.G(row, b.indices[k]) = -1.0;
            f.h(row) = -b.center(static_cast<Eigen::Index>(k));
            ++row;
        }
    }

    const int p_eq = static_cast<int>(p.equalities.size());
    f.A = Eigen::MatrixXd::Zero(p_eq, n);
    f.b = Eigen::VectorXd::Zero(p_eq);
    for (int k = 0; k < p_eq; ++k)
    {
        f.A.row(k).head(p.dim) = p.equalities[k].coeffs.transpose();
        f.b(k) = p.equalities[k].rhs;
    }
    return f;
}

std::string to_string(ConeStatus status)
{
    switch (status)
    {
    case ConeStatus::Optimal:
        return "optimal";
    case ConeStatus::Infeasible:
        return "infeasible";
    case ConeStatus::Unbounded:
        return "unbounded";
    case ConeStatus::IterLimit:
        return "iteration_limit";
    }
    return "unknown";
}

// ============================================================ cone algebra

namespace
{

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Cones
{
    int l = 0;
    std::vector<int> q;
    std::vector<int> off; // start row of each SOC block
    int m = 0;

    Cones(int orthant, const std::vector<int> &soc) : l(orthant), q(soc)
    {
        int r = l;
        for (int k : q)
        {
            off.push_back(r);
            r += k;
        }
        m = r;
    }
    int degree() const { return l + static_cast<int>(q.size()); }
};

Vec identity_element(const Cones &K)
{
    Vec e = Vec::Zero(K.m);
    e.head(K.l).setOnes();
    for (std::size_t k = 0; k < K.q.size(); ++k)
        e(K.off[k]) = 1.0;
    return e;
}

// smallest "eigenvalue": s_i on the orthant, s0 - ||s1|| on each SOC
double min_eigen(const Cones &K, const Vec &v)
{
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < K.l; ++i)
        r = std::min(r, v(i));
    for (std::size_t k = 0; k < K.q.size(); ++k)
        r = std::min(r, v(K.off[k]) - v.segment(K.off[k] + 1, K.q[k] - 1).norm());
    return r;
}

// largest alpha in [0, cap] with v + alpha d in the cone
double max_step(const Cones &K, const Vec &v, const Vec &d, double cap)
{
    double a = cap;
    for (int i = 0; i < K.l; ++i)
        if (d(i) < 0.0)
            a = std::min(a, -v(i) / d(i));
    for (std::size_t k = 0; k < K.q.size(); ++k)
    {
        const int o = K.off[k];
        const int len = K.q[k] - 1;
        const double v0 = v(o), d0 = d(o);
        const auto v1 = v.segment(o + 1, len);
        const auto d1 = d.segment(o + 1, len);
        const double jv = v0 * v0 - v1.squaredNorm();
        if (!(jv > 0.0))
        {
            a = 0.0;
            continue;
        }
        // normalise so the current point has unit J-norm
        const double sc = 1.0 / std::sqrt(jv);
        const double qa = (d0 * d0 - d1.squaredNorm()) * sc * sc;
        const double qb = 2.0 * (v0 * d0 - v1.dot(d1)) * sc * sc;
        const double qc = 1.0;
        double root = std::numeric_limits<double>::infinity();
        if (std::abs(qa) < 1e-14 * (std::abs(qb) + 1.0))
        {
            if (qb < 0.0)
                root = -qc / qb;
        }
        else
        {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0)
            {
                const double sq = std::sqrt(disc);
                const double qq = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
                const double r1 = qq / qa;
                const double r2 = qq != 0.0 ? qc / qq : std::numeric_limits<double>::infinity();
                if (r1 > 0.0)
                    root = std::min(root, r1);
                if (r2 > 0.0)
                    root = std::min(root, r2);
            }
        }
        // the linear condition v0 + alpha d0 >= 0 is implied before the first root
        if (d0 < 0.0)
            root = std::min(root, -v0 / d0);
        a = std::min(a, root);
    }
    return std::max(a, 0.0);
}

// Jordan product u o v
Vec jordan_product(const Cones &K, const Vec &u, const Vec &v)
{
    Vec r(K.m);
    r.head(K.l) = u.head(K.l).cwiseProduct(v.head(K.l));
    for (std::size_t k = 0; k < K.q.size(); ++k)
    {
        const int o = K.off[k];
        const int len = K.q[k] - 1;
        r(o) = u.segment(o, K.q[k]).dot(v.segment(o, K.q[k]));
        r.segment(o + 1, len) = u(o) * v.segment(o + 1, len) + v(o) * u.segment(o + 1, len);
    }
    return r;
}

// solve lambda o u = d for u
Vec jordan_divide(const Cones &K, const Vec &lambda, const Vec &d)
{
    Vec u(K.m);
    u.head(K.l) = d.head(K.l).cwiseQuotient(lambda.head(K.l));
    for (std::size_t k = 0; k < K.q.size(); ++k)
    {
        const int o = K.off[k];
        const int len = K.q[k] - 1;
        const double l0 = lambda(o);
        const auto l1 = lambda.segment(o + 1, len);
        const double det = l0 * l0 - l1.squaredNorm();
        const double u0 = (l0 * d(o) - l1.dot(d.segment(o + 1, len))) / det;
        u(o) = u0;
        u.segment(o + 1, len) = (d.segment(o + 1, len) - u0 * l1) / l0;
    }
    return u;
}

// Nesterov-Todd scaling W with W z = W^{-1} s = lambda, W symmetric positive definite
struct Scaling
{
    Vec lp;                // orthant: sqrt(s / z)
    std::vector<Vec> wbar; // SOC: unit J-norm scaling point
    std::vector<double> eta;

    void update(const Cones &K, const Vec &s, const Vec &z)
    {
        lp = (s.head(K.l).array() / z.head(K.l).array()).sqrt();
        wbar.resize(K.q.size());
        eta.resize(K.q.size());
        for (std::size_t k = 0; k < K.q.size(); ++k)
        {
            const int o = K.off[k];
            const int len = K.q[k] - 1;
            const Vec sk = s.segment(o, K.q[k]);
            const Vec zk = z.segment(o, K.q[k]);
            const double sn = std::sqrt(std::max(sk(0) * sk(0) - sk.tail(len).squaredNorm(), 1e-300));
            const double zn = std::sqrt(std::max(zk(0) * zk(0) - zk.tail(len).squaredNorm(), 1e-300));
            const Vec sb = sk / sn;
            const Vec zb = zk / zn;
            const double gamma = std::sqrt(std::max((1.0 + sb.dot(zb)) / 2.0, 1e-300));
            Vec w(K.q[k]);
            w(0) = (sb(0) + zb(0)) / (2.0 * gamma);
            w.tail(len) = (sb.tail(len) - zb.tail(len)) / (2.0 * gamma);
            // restore unit J-norm lost to rounding: w0 = sqrt(1 + ||w1||^2)
            w(0) = std::sqrt(1.0 + w.tail(len).squaredNorm());
            wbar[k] = w;
            eta[k] = std::sqrt(sn / zn);
        }
    }

    // v <- W v (inverse = false) or W^{-1} v (inverse = true), v of length m
    void apply(const Cones &K, Eigen::Ref<Vec> v, bool inverse) const
    {
        if (inverse)
            v.head(K.l).array() /= lp.array();
        else
            v.head(K.l).array() *= lp.array();
        for (std::size_t k = 0; k < K.q.size(); ++k)
        {
            const int o = K.off[k];
            const int len = K.q[k] - 1;
            const Vec &w = wbar[k];
            const double w0 = w(0);
            const auto w1 = w.tail(len);
            const double v0 = v(o);
            const double zeta = w1.dot(v.segment(o + 1, len));
            const double sign = inverse ? -1.0 : 1.0;
            const double scale = inverse ? 1.0 / eta[k] : eta[k];
            const double r0 = w0 * v0 + sign * zeta;
            v.segment(o + 1, len) += (sign * v0 + zeta / (1.0 + w0)) * w1;
            v(o) = r0;
            v.segment(o, K.q[k]) *= scale;
        }
    }

    Vec times(const Cones &K, const Vec &v, bool inverse) const
    {
        Vec r = v;
        apply(K, r, inverse);
        return r;
    }
};

// Reduced KKT solver for [[0, A^T, G^T], [A, 0, 0], [G, 0, -W^2]]
class KktSolver
{
public:
    KktSolver(const Mat &A, const Mat &G, const Cones &K) : A_(A), G_(G), K_(K) {}

    bool factor(const Scaling &W)
    {
        W_ = &W;
        Gs_ = G_;
        for (Eigen::Index j = 0; j < Gs_.cols(); ++j)
        {
            auto col = Gs_.col(j);
            W.apply(K_, col, true);
        }
        Mat H = Gs_.transpose() * Gs_;
        const double base = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        for (double reg = 1e-13; reg < 1e-2; reg *= 100.0)
        {
            Mat Hr = H;
            Hr.diagonal().array() += reg * base;
            llt_H_.compute(Hr);
            if (llt_H_.info() != Eigen::Success)
                continue;
            if (A_.rows() > 0)
            {
                Y_ = llt_H_.solve(A_.transpose());
                Mat S = A_ * Y_;
                const double sbase = std::max(1.0, S.diagonal().cwiseAbs().maxCoeff());
                S.diagonal().array() += reg * sbase;
                llt_S_.compute(S);
                if (llt_S_.info() != Eigen::Success)
                    continue;
            }
            return true;
        }
        return false;
    }

    // solve K [dx; dy; dz] = [r1; r2; r3], with iterative refinement on the exact system
    void solve(const Vec &r1, const Vec &r2, const Vec &r3, Vec &dx, Vec &dy, Vec &dz, int refine) const
    {
        solve_once(r1, r2, r3, dx, dy, dz);
        for (int it = 0; it < refine; ++it)
        {
            Vec e1, e2, e3;
            residual(r1, r2, r3, dx, dy, dz, e1, e2, e3);
            const double err = std::max({e1.lpNorm<Eigen::Infinity>(), e2.size() ? e2.lpNorm<Eigen::Infinity>() : 0.0,
                                         e3.lpNorm<Eigen::Infinity>()});
            const double ref = 1.0 + std::max({r1.lpNorm<Eigen::Infinity>(), r2.size() ? r2.lpNorm<Eigen::Infinity>() : 0.0,
                                               r3.lpNorm<Eigen::Infinity>()});
            if (err <= 1e-15 * ref)
                break;
            Vec cx, cy, cz;
            solve_once(e1, e2, e3, cx, cy, cz);
            dx += cx;
            dy += cy;
            dz += cz;
        }
    }

private:
    void solve_once(const Vec &r1, const Vec &r2, const Vec &r3, Vec &dx, Vec &dy, Vec &dz) const
    {
        const Vec w3 = W_->times(K_, r3, true);
        const Vec rhs = r1 + Gs_.transpose() * w3;
        if (A_.rows() > 0)
        {
            const Vec hr = llt_H_.solve(rhs);
            dy = llt_S_.solve(A_ * hr - r2);
            dx = llt_H_.solve(rhs - A_.transpose() * dy);
        }
        else
        {
            dy = Vec::Zero(0);
            dx = llt_H_.solve(rhs);
        }
        dz = W_->times(K_, Vec(Gs_ * dx - w3), true);
    }

    void residual(const Vec &r1, const Vec &r2, const Vec &r3, const Vec &dx, const Vec &dy, const Vec &dz, Vec &e1,
                  Vec &e2, Vec &e3) const
    {
        e1 = r1 - G_.transpose() * dz;
        if (A_.rows() > 0)
            e1 -= A_.transpose() * dy;
        e2 = r2 - A_ * dx;
        const Vec wwdz = W_->times(K_, W_->times(K_, dz, false), false);
        e3 = r3 - (G_ * dx - wwdz);
    }

    const Mat &A_;
    const Mat &G_;
    const Cones &K_;
    const Scaling *W_ = nullptr;
    Mat Gs_, Y_;
    Eigen::LLT<Mat> llt_H_, llt_S_;
};

// Ruiz equilibration of [A; G]; SOC blocks share one row factor so cones are preserved
struct Equilibration
{
    Vec col, row_a, row_g;
};

Equilibration equilibrate(Mat &A, Mat &G, const Cones &K)
{
    const Eigen::Index n = G.cols();
    Equilibration e{Vec::Ones(n), Vec::Ones(A.rows()), Vec::Ones(G.rows())};
    auto clampf = [](double v) { return std::clamp(v, 1e-4, 1e4); };
    for (int it = 0; it < 25; ++it)
    {
        Vec cs(n);
        for (Eigen::Index j = 0; j < n; ++j)
        {
            double v = G.col(j).cwiseAbs().maxCoeff();
            if (A.rows() > 0)
                v = std::max(v, A.col(j).cwiseAbs().maxCoeff());
            cs(j) = v > 0.0 ? clampf(1.0 / std::sqrt(v)) : 1.0;
        }
        Vec ra(A.rows());
        for (Eigen::Index i = 0; i < A.rows(); ++i)
        {
            const double v = A.row(i).cwiseAbs().maxCoeff();
            ra(i) = v > 0.0 ? clampf(1.0 / std::sqrt(v)) : 1.0;
        }
        Vec rg(G.rows());
        for (int i = 0; i < K.l; ++i)
        {
            const double v = G.row(i).cwiseAbs().maxCoeff();
            rg(i) = v > 0.0 ? clampf(1.0 / std::sqrt(v)) : 1.0;
        }
        for (std::size_t k = 0; k < K.q.size(); ++k)
        {
            const double v = G.middleRows(K.off[k], K.q[k]).cwiseAbs().maxCoeff();
            rg.segment(K.off[k], K.q[k]).setConstant(v > 0.0 ? clampf(1.0 / std::sqrt(v)) : 1.0);
        }
        G = rg.asDiagonal() * G * cs.asDiagonal();
        if (A.rows() > 0)
            A = ra.asDiagonal() * A * cs.asDiagonal();
        e.col.array() *= cs.array();
        e.row_a.array() *= ra.array();
        e.row_g.array() *= rg.array();
        if ((cs.array() - 1.0).abs().maxCoeff() < 1e-3 && (rg.array() - 1.0).abs().maxCoeff() < 1e-3)
            break;
    }
    return e;
}

struct Metrics
{
    double pcost, dcost, pres, dres, gap;
};

} // namespace

// ============================================================ interior point

ConicSolution solve_conic(const ConicForm &form, const SolverOptions &opt)
{
    const Cones K(form.orthant, form.soc);
    const Eigen::Index n = form.c.size();
    const Eigen::Index p = form.A.rows();
    if (form.G.rows() != K.m || form.G.cols() != n || form.h.size() != K.m ||
        (p > 0 && form.A.cols() != n) || form.b.size() != p)
        throw Error("conic form has inconsistent dimensions");
    for (int k : K.q)
        if (k < 1)
            throw Error("second-order cone blocks need at least one row");

    // scaled copy: A' = Ea A D, G' = Eg G D, c' = D c, b' = Ea b, h' = Eg h
    Mat A = form.A, G = form.G;
    const Equilibration eq = equilibrate(A, G, K);
    const Vec c = eq.col.cwiseProduct(form.c);
    const Vec b = eq.row_a.cwiseProduct(form.b);
    const Vec h = eq.row_g.cwiseProduct(form.h);

    ConicSolution out;
    const Vec e = identity_element(K);
    Scaling W;
    KktSolver kkt(A, G, K);

    // original-unit metrics at the homogeneous iterate
    auto metrics = [&](const Vec &x, const Vec &y, const Vec &z, const Vec &s, double tau) -> Metrics
    {
        const Vec xo = eq.col.cwiseProduct(x) / tau;
        const Vec yo = eq.row_a.cwiseProduct(y) / tau;
        const Vec zo = eq.row_g.cwiseProduct(z) / tau;
        const Vec so = s.cwiseQuotient(eq.row_g) / tau;
        Metrics mt;
        mt.pcost = form.c.dot(xo);
        mt.dcost = -(form.b.dot(yo) + form.h.dot(zo));
        double pr = (form.G * xo + so - form.h).norm() / (1.0 + form.h.norm());
        if (p > 0)
            pr = std::max(pr, (form.A * xo - form.b).norm() / (1.0 + form.b.norm()));
        Vec dr = form.G.transpose() * zo + form.c;
        if (p > 0)
            dr += form.A.transpose() * yo;
        mt.pres = pr;
        mt.dres = dr.norm() / (1.0 + form.c.norm());
        mt.gap = so.dot(zo);
        return mt;
    };
    auto finish = [&](ConeStatus st, const Vec &x, const Vec &y, const Vec &z, const Vec &s, double tau, int it,
                      const std::string &detail)
    {
        out.status = st;
        out.iterations = it;
        out.detail = detail;
        out.x = eq.col.cwiseProduct(x) / tau;
        out.y = eq.row_a.cwiseProduct(y) / tau;
        out.z = eq.row_g.cwiseProduct(z) / tau;
        out.s = s.cwiseQuotient(eq.row_g) / tau;
        const Metrics mt = metrics(x, y, z, s, tau);
        out.primal_cost = mt.pcost;
        out.dual_cost = mt.dcost;
        out.primal_residual = mt.pres;
        out.dual_residual = mt.dres;
        out.gap = mt.gap;
        return out;
    };

    // initial point from two least-squares solves with W = I
    W.lp = Vec::Ones(K.l);
    W.wbar.assign(K.q.size(), Vec());
    W.eta.assign(K.q.size(), 1.0);
    for (std::size_t k = 0; k < K.q.size(); ++k)
    {
        W.wbar[k] = Vec::Zero(K.q[k]);
        W.wbar[k](0) = 1.0;
    }
    if (!kkt.factor(W))
        throw Error("cone solver: singular initial KKT system");

    Vec x, y, z, s;
    {
        Vec x0, y0, z0;
        kkt.solve(Vec::Zero(n), b, h, x0, y0, z0, opt.refinement_steps);
        x = x0;
        s = -z0;
        const double ap = -min_eigen(K, s);
        if (ap >= -1e-8)
            s += (1.0 + ap) * e;
        kkt.solve(-c, Vec::Zero(p), Vec::Zero(K.m), x0, y0, z0, opt.refinement_steps);
        y = y0;
        z = z0;
        const double ad = -min_eigen(K, z);
        if (ad >= -1e-8)
            z += (1.0 + ad) * e;
    }
    double tau = 1.0, kappa = 1.0;
    const double tol = opt.tolerance;

    // Near the optimum the residuals can degrade again through round-off; the best
    // iterate seen is returned when the remaining progress stalls within 100 * tol.
    struct Snapshot
    {
        Vec x, y, z, s;
        double tau = 1.0;
        double score = std::numeric_limits<double>::infinity();
        int it = 0;
    } best;
    auto score_of = [](const Metrics &mt)
    {
        const double scale = 1.0 + std::abs(mt.pcost);
        return std::max({mt.pres, mt.dres, mt.gap / scale, std::abs(mt.pcost - mt.dcost) / scale});
    };
    auto stalled = [&](int it, const std::string &why)
    {
        if (best.score <= 100.0 * tol)
            return finish(ConeStatus::Optimal, best.x, best.y, best.z, best.s, best.tau, best.it,
                          why + "; returning the best iterate at reduced accuracy");
        return finish(ConeStatus::IterLimit, x, y, z, s, tau, it, why);
    };

    for (int it = 0; it <= opt.max_iters; ++it)
    {
        Vec rx = G.transpose() * z + c * tau;
        if (p > 0)
            rx += A.transpose() * y;
        const Vec ry = (p > 0) ? Vec(A * x - b * tau) : Vec::Zero(0);
        const Vec rz = s + G * x - h * tau;
        const double rtau = kappa + c.dot(x) + b.dot(y) + h.dot(z);

        const Metrics mt = metrics(x, y, z, s, tau);
        if (mt.pres <= tol && mt.dres <= tol && mt.gap <= tol * (1.0 + std::abs(mt.pcost)) &&
            std::abs(mt.pcost - mt.dcost) <= tol * (1.0 + std::abs(mt.pcost)))
            return finish(ConeStatus::Optimal, x, y, z, s, tau, it, "");
        if (const double sc = score_of(mt); sc < best.score)
            best = {x, y, z, s, tau, sc, it};

        // infeasibility certificates (only meaningful once kappa dominates tau)
        const double hzby = h.dot(z) + b.dot(y);
        if (kappa > tau && hzby < 0.0)
        {
            Vec aty = G.transpose() * z;
            if (p > 0)
                aty += A.transpose() * y;
            if (aty.norm() / -hzby <= tol)
            {
                out = finish(ConeStatus::Infeasible, x, y, z, s, 1.0, it, "primal infeasibility certificate");
                const double scl = -hzby;
                out.y = eq.row_a.cwiseProduct(y) / scl;
                out.z = eq.row_g.cwiseProduct(z) / scl;
                return out;
            }
        }
        const double cx = c.dot(x);
        if (kappa > tau && cx < 0.0)
        {
            double r = (G * x + s).norm();
            if (p > 0)
                r = std::max(r, (A * x).norm());
            if (r / -cx <= tol)
            {
                out = finish(ConeStatus::Unbounded, x, y, z, s, 1.0, it, "dual infeasibility certificate");
                out.x = eq.col.cwiseProduct(x) / -cx;
                return out;
            }
        }
        if (it == opt.max_iters)
            return stalled(it, "iteration cap reached");

        W.update(K, s, z);
        if (!kkt.factor(W))
            return stalled(it, "KKT factorization failed");
        const Vec lambda = W.times(K, z, false);
        const double mu = (s.dot(z) + tau * kappa) / (K.degree() + 1);

        Vec x1, y1, z1;
        kkt.solve(-c, b, h, x1, y1, z1, opt.refinement_steps);
        const double den = c.dot(x1) + b.dot(y1) + h.dot(z1) - kappa / tau;

        // one Newton direction for target d_s, d_kappa and residual weight eta
        auto direction = [&](double etaw, const Vec &ds_target, double dk_target, Vec &dx, Vec &dy, Vec &dz, Vec &dsv,
                             double &dtau, double &dkap)
        {
            const Vec u = jordan_divide(K, lambda, ds_target);
            const Vec wu = W.times(K, u, false);
            Vec x2, y2, z2;
            kkt.solve(-etaw * rx, -etaw * ry, Vec(-etaw * rz - wu), x2, y2, z2, opt.refinement_steps);
            dtau = (-etaw * rtau - dk_target / tau - c.dot(x2) - b.dot(y2) - h.dot(z2)) / den;
            dx = x2 + dtau * x1;
            dy = y2 + dtau * y1;
            dz = z2 + dtau * z1;
            dsv = W.times(K, Vec(u - W.times(K, dz, false)), false);
            dkap = (dk_target - kappa * dtau) / tau;
        };
        auto step_length = [&](const Vec &dsv, const Vec &dz, double dtau, double dkap, double cap)
        {
            double a = std::min(max_step(K, s, dsv, cap), max_step(K, z, dz, cap));
            if (dtau < 0.0)
                a = std::min(a, -tau / dtau);
            if (dkap < 0.0)
                a = std::min(a, -kappa / dkap);
            return a;
        };

        // predictor
        Vec dxa, dya, dza, dsa;
        double dta, dka;
        const Vec ll = jordan_product(K, lambda, lambda);
        direction(1.0, -ll, -tau * kappa, dxa, dya, dza, dsa, dta, dka);
        const double alpha_a = step_length(dsa, dza, dta, dka, 1.0);
        const double sigma = std::clamp(std::pow(1.0 - alpha_a, 3), 0.0, 1.0);

        // corrector with second-order term
        const Vec cross = jordan_product(K, W.times(K, dsa, true), W.times(K, dza, false));
        const Vec ds_target = -ll + sigma * mu * e - cross;
        const double dk_target = -tau * kappa + sigma * mu - dta * dka;
        Vec dx, dy, dz, dsv;
        double dt, dk;
        direction(1.0 - sigma, ds_target, dk_target, dx, dy, dz, dsv, dt, dk);
        const double alpha = std::min(1.0, 0.99 * step_length(dsv, dz, dt, dk, 1.0 / 0.99));
        if (!(alpha > 1e-12) || !std::isfinite(alpha))
            return stalled(it, "step length collapsed");

        x += alpha * dx;
        y += alpha * dy;
        z += alpha * dz;
        s += alpha * dsv;
        tau += alpha * dt;
        kappa += alpha * dk;
    }
    return out;
}

ConeSolution solve(const ConeProgram &program, const SolverOptions &options)
{
    const ConicForm form = compile(program);
    const ConicSolution cs = solve_conic(form, options);

    ConeSolution sol;
    sol.status = cs.status;
    sol.iterations = cs.iterations;
    sol.detail = cs.detail;
    sol.affine_duals.resize(program.affine_le.size());
    for (int k = 0; k < form.orthant; ++k)
        sol.affine_duals[k] = cs.z(k);

    if (cs.status == ConeStatus::Infeasible)
    {
        // report the affine rows carrying most of the certificate weight
        std::ostringstream os;
        os << "infeasible: certificate weights on affine rows";
        double total = 0.0;
        for (int k = 0; k < form.orthant; ++k)
            total += std::max(cs.z(k), 0.0);
        for (int k = 0; k < form.orthant; ++k)
            if (total > 0.0 && cs.z(k) > 1e-6 * total)
                os << " [row " << k << ": " << cs.z(k) / total << "]";
        sol.detail = os.str();
        sol.x = Eigen::VectorXd::Zero(program.dim);
        return sol;
    }
    sol.x = cs.x.head(program.dim);
    sol.objective = program.objective(sol.x);
    sol.duality_gap = std::abs(cs.primal_cost - cs.dual_cost);
    const double relgap = std::max(cs.gap, sol.duality_gap) / (1.0 + std::abs(cs.primal_cost));
    sol.kkt_residual = std::max({cs.primal_residual, cs.dual_residual, relgap});
    sol.constraint_violation = program.max_violation(sol.x);
    return sol;
}

// ============================================================ SCA subproblems

ConeProgram assemble_w_subproblem(const Eigen::VectorXd &chain_weight, const std::vector<LinearizedVoltage> &lins,
                                  const std::vector<double> &targets, const Waveform &w0)
{
    const int n_rf = w0.chains();
    const int nf = w0.tones();
    if (chain_weight.size() != n_rf)
        throw Error("chain weight count does not match the waveform");
    if (lins.size() != targets.size())
        throw Error("one target per linearization is required");
    const int dim = 2 * n_rf * nf;
    const Eigen::VectorXd x0 = to_real(w0.flatten());

    ConeProgram p(dim);
    // HPA bound: sum_i weight_i ||omega_i||, each chain a contiguous block of 2 n_f reals
    for (int i = 0; i < n_rf; ++i)
    {
        if (!(chain_weight(i) > 0.0))
            continue;
        NormTerm t;
        t.scale = chain_weight(i);
        for (int k = 0; k < 2 * nf; ++k)
            t.indices.push_back(2 * i * nf + k);
        p.norms.push_back(std::move(t));
    }
    // input power ||omega||^2
    p.squared_weight = 1.0;
    for (int k = 0; k < dim; ++k)
        p.squared_indices.push_back(k);
    // base + g^T (x - x0) >= target  <=>  -g^T x <= base - g^T x0 - target
    for (std::size_t m = 0; m < lins.size(); ++m)
    {
        const Eigen::VectorXd g = lins[m].real_gradient();
        if (g.size() != dim)
            throw Error("linearization length does not match the waveform");
        p.affine_le.push_back({-g, lins[m].base - g.dot(x0) - targets[m]});
    }
    return p;
}

ConeProgram assemble_w_subproblem(const ScenarioConfig &scenario, const DmaState *dma,
                                  const std::vector<LinearizedVoltage> &lins, const Waveform &w0)
{
    const auto &d = scenario.device;
    const Eigen::VectorXd weight = std::sqrt(d.hpa_saturation_power) / d.hpa_max_efficiency *
                                   chain_scales(scenario.array, dma, d.hpa_gain);
    std::vector<double> targets;
    for (const auto &r : scenario.receivers)
        targets.push_back(required_voltage(r.requirement, d.load_resistance));
    return assemble_w_subproblem(weight, lins, targets, w0);
}

ConeProgram assemble_q_subproblem(const std::vector<LinearizedVoltage> &lins, const CVector &q0)
{
    const int n_el = static_cast<int>(q0.size());
    const int dim = 2 * n_el + 1;
    const int r_idx = dim - 1;
    const Eigen::VectorXd x0 = to_real(q0);

    ConeProgram p(dim);
    p.linear(r_idx) = -1.0; // maximize R
    // R <= base + g^T (q - q0)  <=>  R - g^T q <= base - g^T q0
    for (const auto &lin : lins)
    {
        const Eigen::VectorXd g = lin.real_gradient();
        if (g.size() != 2 * n_el)
            throw Error("linearization length does not match the metamaterial count");
        AffineRow row;
        row.coeffs = Eigen::VectorXd::Zero(dim);
        row.coeffs.head(2 * n_el) = -g;
        row.coeffs(r_idx) = 1.0;
        row.rhs = lin.base - g.dot(x0);
        p.affine_le.push_back(std::move(row));
    }
    // Lorentzian disk |q - j/2| <= 1/2
    for (int u = 0; u < n_el; ++u)
    {
        Ball b;
        b.indices = {2 * u, 2 * u + 1};
        b.center = Eigen::Vector2d(0.0, 0.5);
        b.radius = 0.5;
        p.balls.push_back(std::move(b));
    }
    return p;
}

} // namespace nfwpt
