#include "herald/dop853.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "herald/error.hpp"

namespace herald {

namespace {

// Dormand-Prince 8(5,3) tableau.
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double kSafe = 0.9;
constexpr double kMinScale = 0.333;
constexpr double kMaxScale = 6.0;

// sum over components of (x / sc)^2, real and imaginary parts separately
double scaled_sq(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y0, const Eigen::MatrixXcd& y1,
                 double rtol, double atol) {
    double s = 0.0;
    const auto n = x.size();
    const auto* px = x.data();
    const auto* p0 = y0.data();
    const auto* p1 = y1.data();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sr = atol + rtol * std::max(std::abs(p0[i].real()), std::abs(p1[i].real()));
        const double si = atol + rtol * std::max(std::abs(p0[i].imag()), std::abs(p1[i].imag()));
        const double er = px[i].real() / sr;
        const double ei = px[i].imag() / si;
        s += er * er + ei * ei;
    }
    return s;
}

double initial_step(const Dop853Rhs& rhs, double t, const Eigen::MatrixXcd& y, const Eigen::MatrixXcd& f0,
                    double rtol, double atol, double h_limit, long& evals) {
    const double n = 2.0 * static_cast<double>(y.size());
    const double d0 = std::sqrt(scaled_sq(y, y, y, rtol, atol) / n);
    const double d1 = std::sqrt(scaled_sq(f0, y, y, rtol, atol) / n);
    double h0 = (d0 <= 1e-10 || d1 <= 1e-10) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, h_limit);
    Eigen::MatrixXcd y1 = y + h0 * f0;
    Eigen::MatrixXcd f1(y.rows(), y.cols());
    rhs(t + h0, y1, f1);
    ++evals;
    const double d2 = std::sqrt(scaled_sq(f1 - f0, y, y, rtol, atol) / n) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 8.0);
    return std::min({100.0 * h0, h1, h_limit});
}

}  // namespace

Dop853Stats dop853_integrate(const Dop853Rhs& rhs, Eigen::MatrixXcd& y, double t0,
                             const std::vector<double>& samples, const Dop853Observer& observe,
                             const Dop853Options& opt) {
    Dop853Stats stats;
    if (samples.empty()) return stats;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double prev = i == 0 ? t0 : samples[i - 1];
        if (!(samples[i] > prev)) throw ParameterError("dop853_integrate: sample times must increase past t0");
    }
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw ParameterError("dop853_integrate: tolerances must be > 0");

    const auto rows = y.rows();
    const auto cols = y.cols();
    auto mk = [&] { return Eigen::MatrixXcd(rows, cols); };
    Eigen::MatrixXcd k1 = mk(), k2 = mk(), k3 = mk(), k4 = mk(), k5 = mk(), k6 = mk(), k7 = mk(),
                     k8 = mk(), k9 = mk(), k10 = mk(), yw = mk(), ynew = mk(), e3 = mk(), e5 = mk();
    const double n_comp = 2.0 * static_cast<double>(y.size());
    const double t_end = samples.back();
    const double h_limit = opt.h_max > 0.0 ? opt.h_max : t_end - t0;

    double t = t0;
    rhs(t, y, k1);
    ++stats.rhs_evals;
    double h = opt.h_init > 0.0 ? std::min(opt.h_init, h_limit)
                                : initial_step(rhs, t, y, k1, opt.rtol, opt.atol, h_limit, stats.rhs_evals);
    bool last_rejected = false;
    std::size_t next = 0;

    while (next < samples.size()) {
        if (stats.accepted + stats.rejected >= opt.max_steps) {
            throw IntegrationError("dop853_integrate: maximum number of steps exceeded");
        }
        const double target = samples[next];
        bool lands = false;
        double hs = h;
        if (t + hs >= target) {
            hs = target - t;
            lands = true;
        }
        if (hs <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            if (lands) {
                // Already at the sample time up to roundoff.
                t = target;
                if (!observe(t, y)) return stats;
                ++next;
                rhs(t, y, k1);
                ++stats.rhs_evals;
                continue;
            }
            throw IntegrationError("dop853_integrate: step size underflow (problem too stiff?)");
        }

        yw = y + hs * a21 * k1;
        rhs(t + c2 * hs, yw, k2);
        yw = y + hs * (a31 * k1 + a32 * k2);
        rhs(t + c3 * hs, yw, k3);
        yw = y + hs * (a41 * k1 + a43 * k3);
        rhs(t + c4 * hs, yw, k4);
        yw = y + hs * (a51 * k1 + a53 * k3 + a54 * k4);
        rhs(t + c5 * hs, yw, k5);
        yw = y + hs * (a61 * k1 + a64 * k4 + a65 * k5);
        rhs(t + c6 * hs, yw, k6);
        yw = y + hs * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6);
        rhs(t + c7 * hs, yw, k7);
        yw = y + hs * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7);
        rhs(t + c8 * hs, yw, k8);
        yw = y + hs * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8);
        rhs(t + c9 * hs, yw, k9);
        yw = y + hs * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 + a107 * k7 + a108 * k8 + a109 * k9);
        rhs(t + c10 * hs, yw, k10);
        yw = y + hs * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7 + a118 * k8 +
                       a119 * k9 + a1110 * k10);
        rhs(t + c11 * hs, yw, k2);  // stage 11 reuses k2
        yw = y + hs * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 + a128 * k8 +
                       a129 * k9 + a1210 * k10 + a1211 * k2);
        rhs(t + hs, yw, k3);  // stage 12 reuses k3
        stats.rhs_evals += 11;

        k4 = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k2 + b12 * k3;
        ynew = y + hs * k4;

        e5 = er1 * k1 + er6 * k6 + er7 * k7 + er8 * k8 + er9 * k9 + er10 * k10 + er11 * k2 + er12 * k3;
        e3 = k4 - bhh1 * k1 - bhh2 * k9 - bhh3 * k3;
        const double err5 = scaled_sq(e5, y, ynew, opt.rtol, opt.atol);
        const double err3 = scaled_sq(e3, y, ynew, opt.rtol, opt.atol);
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        const double err = std::abs(hs) * err5 * std::sqrt(1.0 / (n_comp * deno));
        if (!std::isfinite(err)) throw IntegrationError("dop853_integrate: non-finite error estimate");

        double scale = err == 0.0 ? kMaxScale : kSafe * std::pow(err, -1.0 / 8.0);
        scale = std::clamp(scale, kMinScale, kMaxScale);

        if (err <= 1.0) {
            ++stats.accepted;
            y.swap(ynew);
            t = lands ? target : t + hs;
            if (last_rejected) scale = std::min(scale, 1.0);
            last_rejected = false;
            // keep the controller's step, not the shortened landing step
            h = std::min((lands ? std::max(h, hs) : hs) * scale, h_limit);
            if (lands) {
                if (!observe(t, y)) return stats;
                ++next;
            }
            rhs(t, y, k1);
            ++stats.rhs_evals;
        } else {
            ++stats.rejected;
            last_rejected = true;
            h = hs * scale;
        }
    }
    return stats;
}

}  // namespace herald
