#include "rtm/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rtm {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double series_split = 14.0;

// J0 and J1 together by Miller's backward recurrence, normalized with
// J0 + 2*sum J_{2k} = 1.  Full double accuracy for 0 <= x <= ~20.
void bessel_j01_miller(double x, double& j0, double& j1) {
    if (x == 0.0) {
        j0 = 1.0;
        j1 = 0.0;
        return;
    }
    const int start = 2 * static_cast<int>((x + 18.0 + 8.0 * std::sqrt(x)) / 2.0) + 2;
    double fp = 0.0;        // f_{k+1}
    double fc = 1e-300;     // f_k
    double sum = 0.0;
    double f0 = 0.0, f1 = 0.0;
    for (int k = start; k >= 1; --k) {
        const double fm = (2.0 * k / x) * fc - fp;
        fp = fc;
        fc = fm;
        if (k - 1 == 1) f1 = fc;
        if ((k - 1) % 2 == 0 && k - 1 >= 2) sum += fc;
        // rescale to avoid overflow of the unnormalized recurrence
        if (std::abs(fc) > 1e250) {
            fc *= 1e-250;
            fp *= 1e-250;
            sum *= 1e-250;
            f1 *= 1e-250;
        }
    }
    f0 = fc;
    const double norm = f0 + 2.0 * sum;
    j0 = f0 / norm;
    j1 = f1 / norm;
}

// Hankel asymptotic amplitude series P, Q for order n at large x.
void hankel_pq(int n, double x, double& p, double& q) {
    const double mu = 4.0 * n * n;
    double term = 1.0;
    p = 0.0;
    q = 0.0;
    double prev = 1e300;
    for (int m = 0; m < 40; ++m) {
        const double amag = std::abs(term);
        if (amag > prev) break;  // asymptotic series started diverging
        prev = amag;
        if (m % 2 == 0)
            p += ((m / 2) % 2 == 0 ? term : -term);
        else
            q += (((m - 1) / 2) % 2 == 0 ? term : -term);
        const double odd = 2.0 * m + 1.0;
        term *= (mu - odd * odd) / ((m + 1.0) * 8.0 * x);
        if (amag < 1e-18) break;
    }
}

void bessel_asymptotic(int n, double x, double& jn, double& yn) {
    double p, q;
    hankel_pq(n, x, p, q);
    const double chi = x - (2.0 * n + 1.0) * pi / 4.0;
    const double amp = std::sqrt(2.0 / (pi * x));
    const double c = std::cos(chi), s = std::sin(chi);
    jn = amp * (p * c - q * s);
    yn = amp * (p * s + q * c);
}

double bessel_y_series(int n, double x) {
    double j0, j1;
    bessel_j01_miller(x, j0, j1);
    const double lg = std::log(0.5 * x) + euler_gamma;
    const double q = 0.25 * x * x;
    if (n == 0) {
        // (2/pi)[ (ln(x/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2 ]
        double sum = 0.0, hk = 0.0, term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            hk += 1.0 / k;
            term *= q / (k * static_cast<double>(k));
            const double add = (k % 2 == 1 ? term : -term) * hk;
            sum += add;
            if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
        }
        return (2.0 / pi) * (lg * j0 + sum);
    }
    // Y1 = (2/pi)(ln(x/2)+gamma)J1 - 2/(pi x)
    //      - (1/pi) sum_{k>=0} (-1)^k (H_k + H_{k+1}) (x/2)^{2k+1}/(k!(k+1)!)
    double sum = 0.0, hk = 0.0, hk1 = 1.0;
    double term = 0.5 * x;  // (x/2)^{2k+1}/(k!(k+1)!) at k=0
    for (int k = 0; k <= 60; ++k) {
        const double add = (k % 2 == 0 ? term : -term) * (hk + hk1);
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
        hk += 1.0 / (k + 1.0);
        hk1 += 1.0 / (k + 2.0);
        term *= q / ((k + 1.0) * (k + 2.0));
    }
    return (2.0 / pi) * (lg * j1) - 2.0 / (pi * x) - sum / pi;
}

void check_order(int order) {
    if (order != 0 && order != 1)
        throw std::domain_error("bessel: order must be 0 or 1");
}

}  // namespace

double bessel_j(int order, double x) {
    check_order(order);
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("bessel_j: x must be finite and >= 0");
    if (x <= series_split) {
        double j0, j1;
        bessel_j01_miller(x, j0, j1);
        return order == 0 ? j0 : j1;
    }
    double jn, yn;
    bessel_asymptotic(order, x, jn, yn);
    return jn;
}

double bessel_y(int order, double x) {
    check_order(order);
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("bessel_y: x must be finite and > 0");
    if (x <= series_split) return bessel_y_series(order, x);
    double jn, yn;
    bessel_asymptotic(order, x, jn, yn);
    return yn;
}

Complex hankel1(int order, double x) {
    check_order(order);
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("hankel1: x must be finite and > 0 (singular self-interaction)");
    if (x <= series_split) {
        double j0, j1;
        bessel_j01_miller(x, j0, j1);
        const double y = bessel_y_series(order, x);
        return {order == 0 ? j0 : j1, y};
    }
    double jn, yn;
    bessel_asymptotic(order, x, jn, yn);
    return {jn, yn};
}

Complex phi(WaveNumber k, Vec2 x, Vec2 y) {
    const double r = dist(x, y);
    if (r <= 0.0) throw std::domain_error("phi: coincident points");
    return 0.25 * iu * hankel1(0, k.value * r);
}

CVec2 phi_grad(WaveNumber k, Vec2 x, Vec2 y) {
    const double r = dist(x, y);
    if (r <= 0.0) throw std::domain_error("phi_grad: coincident points");
    const Complex f = -0.25 * iu * k.value * hankel1(1, k.value * r) * (1.0 / r);
    return {f * (x.x1 - y.x1), f * (x.x2 - y.x2)};
}

FieldValue phi_field(WaveNumber k, Vec2 x, Vec2 y) {
    return {phi(k, x, y), phi_grad(k, x, y)};
}

}  // namespace rtm
