#include "parares/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parares {

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::aborted_drift: return "aborted-drift";
        case RunStatus::aborted_domain: return "aborted-domain";
    }
    return "unknown";
}

namespace {

using Eigen::Vector4d;

// Dormand-Prince 8(5,3) tableau (Hairer, Norsett & Wanner, DOP853).
constexpr double c2 = 0.526001519587677318785587544488E-01,
                 c3 = 0.789002279381515978178381316732E-01,
                 c4 = 0.118350341907227396726757197510E+00,
                 c5 = 0.281649658092772603273242802490E+00,
                 c6 = 0.333333333333333333333333333333E+00,
                 c7 = 0.25E+00,
                 c8 = 0.307692307692307692307692307692E+00,
                 c9 = 0.651282051282051282051282051282E+00,
                 c10 = 0.6E+00,
                 c11 = 0.857142857142857142857142857142E+00;

constexpr double b1 = 5.42937341165687622380535766363E-2,
                 b6 = 4.45031289275240888144113950566E0,
                 b7 = 1.89151789931450038304281599044E0,
                 b8 = -5.8012039600105847814672114227E0,
                 b9 = 3.1116436695781989440891606237E-1,
                 b10 = -1.52160949662516078556178806805E-1,
                 b11 = 2.01365400804030348374776537501E-1,
                 b12 = 4.47106157277725905176885569043E-2;

constexpr double a21 = 5.26001519587677318785587544488E-2,
                 a31 = 1.97250569845378994544595329183E-2,
                 a32 = 5.91751709536136983633785987549E-2,
                 a41 = 2.95875854768068491816892993775E-2,
                 a43 = 8.87627564304205475450678981324E-2,
                 a51 = 2.41365134159266685502369798665E-1,
                 a53 = -8.84549479328286085344864962717E-1,
                 a54 = 9.24834003261792003115737966543E-1,
                 a61 = 3.7037037037037037037037037037E-2,
                 a64 = 1.70828608729473871279604482173E-1,
                 a65 = 1.25467687566822425016691814123E-1,
                 a71 = 3.7109375E-2,
                 a74 = 1.70252211019544039314978060272E-1,
                 a75 = 6.02165389804559606850219397283E-2,
                 a76 = -1.7578125E-2;

constexpr double a81 = 3.70920001185047927108779319836E-2,
                 a84 = 1.70383925712239993810214054705E-1,
                 a85 = 1.07262030446373284651809199168E-1,
                 a86 = -1.53194377486244017527936158236E-2,
                 a87 = 8.27378916381402288758473766002E-3,
                 a91 = 6.24110958716075717114429577812E-1,
                 a94 = -3.36089262944694129406857109825E0,
                 a95 = -8.68219346841726006818189891453E-1,
                 a96 = 2.75920996994467083049415600797E1,
                 a97 = 2.01540675504778934086186788979E1,
                 a98 = -4.34898841810699588477366255144E1,
                 a101 = 4.77662536438264365890433908527E-1,
                 a104 = -2.48811461997166764192642586468E0,
                 a105 = -5.90290826836842996371446475743E-1,
                 a106 = 2.12300514481811942347288949897E1,
                 a107 = 1.52792336328824235832596922938E1,
                 a108 = -3.32882109689848629194453265587E1,
                 a109 = -2.03312017085086261358222928593E-2;

constexpr double a111 = -9.3714243008598732571704021658E-1,
                 a114 = 5.18637242884406370830023853209E0,
                 a115 = 1.09143734899672957818500254654E0,
                 a116 = -8.14978701074692612513997267357E0,
                 a117 = -1.85200656599969598641566180701E1,
                 a118 = 2.27394870993505042818970056734E1,
                 a119 = 2.49360555267965238987089396762E0,
                 a1110 = -3.0467644718982195003823669022E0,
                 a121 = 2.27331014751653820792359768449E0,
                 a124 = -1.05344954667372501984066689879E1,
                 a125 = -2.00087205822486249909675718444E0,
                 a126 = -1.79589318631187989172765950534E1,
                 a127 = 2.79488845294199600508499808837E1,
                 a128 = -2.85899827713502369474065508674E0,
                 a129 = -8.87285693353062954433549289258E0,
                 a1210 = 1.23605671757943030647266201528E1,
                 a1211 = 6.43392746015763530355970484046E-1;

// Combined fifth/third-order error estimator weights.
constexpr double bhh1 = 0.244094488188976377952755905512E+00,
                 bhh2 = 0.733846688281611857341361741547E+00,
                 bhh3 = 0.220588235294117647058823529412E-01,
                 er1 = 0.1312004499419488073250102996E-01,
                 er6 = -0.1225156446376204440720569753E+01,
                 er7 = -0.4957589496572501915214079952E+00,
                 er8 = 0.1664377182454986536961530415E+01,
                 er9 = -0.3503288487499736816886487290E+00,
                 er10 = 0.3341791187130174790297318841E+00,
                 er11 = 0.8192320648511571246570742613E-01,
                 er12 = -0.2235530786388629525884427845E-01;

constexpr double uround = 2.3e-16;
constexpr double safe = 0.9;
constexpr double fac1 = 1.0 / 3.0, fac2 = 6.0;
// Guard against step-size collapse, not a practical limit: week-long
// horizons at tight tolerance take a few 1e8 steps.
constexpr long step_budget = 1000000000L;

class Dop853 {
public:
    Dop853(const SystemDefinition& sys, const Vector4d& y0, double rtol,
           double atol, double hmax)
        : sys_(sys), rtol_(rtol), atol_(atol), hmax_(hmax), y_(y0) {
        k1_ = rhs(y_);
        h_ = initial_step();
    }

    double t() const { return t_; }
    const Vector4d& y() const { return y_; }

    /// Step until t == target (forward only). Throws DomainError if a
    /// stage leaves the chart, std::runtime_error on step underflow or
    /// an exhausted step budget.
    void advance_to(double target) {
        bool last = false, reject = false;
        while (t_ < target) {
            if (++nstep_ > step_budget)
                throw std::runtime_error("integrate: step budget exhausted");
            if (0.1 * std::abs(h_) <= std::abs(t_) * uround)
                throw std::runtime_error("integrate: step size underflow");
            if (t_ + 1.01 * h_ - target > 0.0) {
                h_ = target - t_;
                last = true;
            }

            const double err = attempt_step();
            const double fac11 = std::pow(err, 0.125);
            double fac = std::clamp(fac11 / safe, 1.0 / fac2, 1.0 / fac1);
            double hnew = h_ / fac;

            if (err <= 1.0) {
                y_ = ynew_;
                k1_ = rhs(y_);
                t_ = last ? target : t_ + h_;
                if (std::abs(hnew) > hmax_) hnew = hmax_;
                if (reject) hnew = std::min(hnew, h_);
                reject = false;
            } else {
                hnew = h_ / std::min(1.0 / fac1, fac11 / safe);
                reject = true;
                last = false;
            }
            h_ = hnew;
        }
    }

private:
    Vector4d rhs(const Vector4d& w) const {
        PhaseState p = PhaseState::from_vector(w);
        if (!sys_.in_domain(p))
            throw DomainError("integrate: state left the chart");
        Vector4d f = sys_.vector_field(p);
        if (!f.allFinite())
            throw DomainError("integrate: vector field not finite");
        return f;
    }

    // Twelve-stage step from (t_, y_); fills ynew_ and returns the scaled
    // error of the embedded pair.
    // The reduced systems are autonomous, so stage times never enter.
    double attempt_step() {
        const double h = h_;
        const Vector4d& w = y_;
        const Vector4d& k1 = k1_;

        Vector4d k2 = rhs(w + h * (a21 * k1));
        Vector4d k3 = rhs(w + h * (a31 * k1 + a32 * k2));
        Vector4d k4 = rhs(w + h * (a41 * k1 + a43 * k3));
        Vector4d k5 = rhs(w + h * (a51 * k1 + a53 * k3 + a54 * k4));
        Vector4d k6 = rhs(w + h * (a61 * k1 + a64 * k4 + a65 * k5));
        Vector4d k7 = rhs(w + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6));
        Vector4d k8 = rhs(w + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6
                                   + a87 * k7));
        Vector4d k9 = rhs(w + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6
                                   + a97 * k7 + a98 * k8));
        Vector4d k10 = rhs(w + h * (a101 * k1 + a104 * k4 + a105 * k5
                                    + a106 * k6 + a107 * k7 + a108 * k8
                                    + a109 * k9));
        Vector4d k11 = rhs(w + h * (a111 * k1 + a114 * k4 + a115 * k5
                                    + a116 * k6 + a117 * k7 + a118 * k8
                                    + a119 * k9 + a1110 * k10));
        Vector4d k12 = rhs(w + h * (a121 * k1 + a124 * k4 + a125 * k5
                                    + a126 * k6 + a127 * k7 + a128 * k8
                                    + a129 * k9 + a1210 * k10 + a1211 * k11));

        Vector4d ksum = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9
                      + b10 * k10 + b11 * k11 + b12 * k12;
        ynew_ = w + h * ksum;

        double err5 = 0.0, err3 = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double sk = 1.0 / (atol_ + rtol_ * std::max(std::abs(w[i]),
                                                    std::abs(ynew_[i])));
            double sqr = (ksum[i] - bhh1 * k1[i] - bhh2 * k9[i]
                          - bhh3 * k12[i]) * sk;
            err3 += sqr * sqr;
            sqr = (er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i]
                   + er9 * k9[i] + er10 * k10[i] + er11 * k11[i]
                   + er12 * k12[i]) * sk;
            err5 += sqr * sqr;
        }
        const double deno = err5 + 0.01 * err3;
        return std::abs(h) * err5 * std::sqrt(1.0 / (deno <= 0.0 ? 4.0
                                                                 : deno * 4.0));
    }

    // Hairer's starting-step heuristic: match h^8 * max(|f0|, |f''|) = 0.01.
    double initial_step() {
        double dnf = 0.0, dny = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double sk = atol_ + rtol_ * std::abs(y_[i]);
            dnf += (k1_[i] / sk) * (k1_[i] / sk);
            dny += (y_[i] / sk) * (y_[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10)
                       ? 1.0e-6
                       : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, hmax_);

        Vector4d k2 = rhs(y_ + h * k1_);
        double der2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double sk = atol_ + rtol_ * std::abs(y_[i]);
            const double sqr = (k2[i] - k1_[i]) / sk;
            der2 += sqr * sqr;
        }
        der2 = std::sqrt(der2) / h;

        const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
        const double h1 = der12 <= 1.0e-15
                              ? std::max(1.0e-6, std::abs(h) * 1.0e-3)
                              : std::pow(0.01 / der12, 0.125);
        return std::min({100.0 * std::abs(h), h1, hmax_});
    }

    const SystemDefinition& sys_;
    double rtol_, atol_, hmax_;
    double t_ = 0.0;
    Vector4d y_, ynew_ = Vector4d::Zero(), k1_ = Vector4d::Zero();
    double h_ = 0.0;
    long nstep_ = 0;
};

void validate(const IntegrationOptions& o) {
    if (!(o.t_end > 0.0))
        throw std::invalid_argument("integrate: t_end must be > 0");
    if (!(o.sample_dt > 0.0))
        throw std::invalid_argument("integrate: sample_dt must be > 0");
    if (!(o.rel_tol > 0.0) || !(o.abs_tol > 0.0))
        throw std::invalid_argument("integrate: tolerances must be > 0");
    if (!(o.drift_abort > 0.0))
        throw std::invalid_argument("integrate: drift_abort must be > 0");
}

std::vector<double> sample_times(const IntegrationOptions& o) {
    std::vector<double> ts;
    const long n = static_cast<long>(std::floor(o.t_end / o.sample_dt + 1e-9));
    ts.reserve(static_cast<size_t>(n) + 1);
    for (long j = 1; j <= n; ++j) ts.push_back(static_cast<double>(j) * o.sample_dt);
    if (ts.empty() || ts.back() < o.t_end * (1.0 - 1e-14))
        ts.push_back(o.t_end);
    return ts;
}

} // namespace

Trajectory integrate(const SystemDefinition& sys, const PhaseState& p0,
                     const IntegrationOptions& opts) {
    validate(opts);
    if (!sys.in_domain(p0))
        throw DomainError("integrate: initial state out of chart");

    Trajectory tr;
    const double h_ref = sys.hamiltonian(p0);
    const double h_scale = std::max(1.0, std::abs(h_ref));
    const double d_scale = std::max(1.0, std::abs(p0.D));
    tr.samples.push_back({0.0, p0});

    Dop853 stepper(sys, p0.as_vector(), opts.rel_tol, opts.abs_tol, opts.t_end);

    for (double target : sample_times(opts)) {
        try {
            stepper.advance_to(target);
        } catch (const DomainError&) {
            tr.status = RunStatus::aborted_domain;
            return tr;
        }
        const PhaseState state = PhaseState::from_vector(stepper.y());
        if (!stepper.y().allFinite()) {
            tr.status = RunStatus::aborted_domain;
            return tr;
        }
        tr.samples.push_back({target, state});
        tr.h_drift = std::max(tr.h_drift,
                              std::abs(sys.hamiltonian(state) - h_ref) / h_scale);
        tr.d_drift = std::max(tr.d_drift,
                              std::abs(state.D - p0.D) / d_scale);
        if (tr.h_drift > opts.drift_abort) {
            tr.status = RunStatus::aborted_drift;
            return tr;
        }
    }
    return tr;
}

ConservationReport conservation_report(const Trajectory& tr,
                                       const SystemDefinition& sys) {
    if (tr.samples.empty())
        throw std::invalid_argument("conservation_report: empty trajectory");
    ConservationReport rep;
    const double h_ref = sys.hamiltonian(tr.samples.front().state);
    const double h_scale = std::max(1.0, std::abs(h_ref));
    const double d_ref = tr.samples.front().state.D;
    const double d_scale = std::max(1.0, std::abs(d_ref));

    double edge = 1.0;
    ConservationReport::Window win{0.0, edge, 0.0, 0.0};
    auto flush = [&rep](ConservationReport::Window& w, double t_to) {
        w.t_to = t_to;
        rep.windows.push_back(w);
    };
    for (size_t i = 1; i < tr.samples.size(); ++i) {
        const auto& s = tr.samples[i];
        while (s.t > edge) {
            flush(win, edge);
            win = {edge, 0.0, 0.0, 0.0};
            edge *= 10.0;
        }
        const double hd = std::abs(sys.hamiltonian(s.state) - h_ref) / h_scale;
        const double dd = std::abs(s.state.D - d_ref) / d_scale;
        win.h_drift = std::max(win.h_drift, hd);
        win.d_drift = std::max(win.d_drift, dd);
        rep.h_drift = std::max(rep.h_drift, hd);
        rep.d_drift = std::max(rep.d_drift, dd);
    }
    flush(win, tr.samples.back().t);
    return rep;
}

} // namespace parares
