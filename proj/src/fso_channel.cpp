#include "fsotrade/fso_channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "fsotrade/errors.hpp"
#include "fsotrade/units.hpp"

namespace fsotrade::fso {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string("FsoLinkParams.") + field + " must be finite and > 0");
    }
}

using NoThrowPolicy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::evaluation_error<boost::math::policies::ignore_error>,
    boost::math::policies::promote_double<false>>;

// log K_nu(z) from K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, scaled
// by the peak of the integrand so neither factor overflows.
double log_bessel_k_integral(double nu, double z) {
    const double t_peak = std::asinh(nu / z);
    const auto phase = [&](double t) { return -z * std::cosh(t) + nu * t; };
    const double peak = phase(t_peak);
    double t_end = t_peak + 1.0;
    while (phase(t_end) - peak > -60.0) t_end = t_peak + 2.0 * (t_end - t_peak);
    const auto integrand = [&](double t) {
        return std::exp(phase(t) - peak) * 0.5 * (1.0 + std::exp(-2.0 * nu * t));
    };
    using boost::math::quadrature::gauss_kronrod;
    double value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, t_end, 15, 1e-12);
    return peak + std::log(value);
}

double log_bessel_k(double nu, double z) {
    nu = std::abs(nu);
    const double k = boost::math::cyl_bessel_k(nu, z, NoThrowPolicy());
    if (std::isfinite(k) && k > std::numeric_limits<double>::min()) return std::log(k);
    return log_bessel_k_integral(nu, z);
}

// Smallest H with P(h > H) < tail via Markov's inequality on the moments
// E[h^n] = Gamma(a+n) Gamma(b+n) / (Gamma(a) Gamma(b) (ab)^n).
double truncation_point(const TurbulenceParams& tp, double tail) {
    const double a = tp.alpha;
    const double b = tp.beta;
    const double base = std::lgamma(a) + std::lgamma(b);
    const double log_ab = std::log(a * b);
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 400; ++n) {
        const double log_moment = std::lgamma(a + n) + std::lgamma(b + n) - base - n * log_ab;
        best = std::min(best, std::exp((log_moment - std::log(tail)) / n));
    }
    return best;
}

}  // namespace

void FsoLinkParams::validate() const {
    require_positive(aperture_diameter_m, "aperture_diameter_m");
    require_positive(divergence_rad, "divergence_rad");
    require_positive(distance_m, "distance_m");
    require_positive(wavelength_m, "wavelength_m");
    require_positive(responsivity, "responsivity");
    require_positive(noise_variance_a2, "noise_variance_a2");
    require_positive(power_w, "power_w");
    require_positive(bandwidth_mhz, "bandwidth_mhz");
    require_positive(cn2, "cn2");
    if (divergence_rad >= std::numbers::pi / 2) {
        throw std::domain_error("FsoLinkParams.divergence_rad must be < pi/2");
    }
    if (wavelength_m <= 1e-7 || wavelength_m >= 1e-5) {
        throw std::domain_error("FsoLinkParams.wavelength_m must lie in (1e-7, 1e-5) m");
    }
}

double TurbulenceParams::scintillation_index() const {
    return 1.0 / alpha + 1.0 / beta + 1.0 / (alpha * beta);
}

WeatherState WeatherState::from_visibility(double visibility_km, double wavelength_m) {
    return {attenuation_coefficient(visibility_km, wavelength_m), visibility_km};
}

WeatherState WeatherState::from_db_per_km(double db_per_km) {
    if (!(db_per_km >= 0.0)) throw std::domain_error("attenuation must be >= 0 dB/km");
    return {units::kappa_from_db_per_km(db_per_km), std::nullopt};
}

double WeatherState::kappa_db_per_km() const { return units::kappa_to_db_per_km(kappa_per_km); }

double attenuation_coefficient(double visibility_km, double wavelength_m) {
    if (!(visibility_km > 0.0) || !std::isfinite(visibility_km)) {
        throw std::domain_error("visibility must be finite and > 0 km");
    }
    if (!(wavelength_m > 0.0)) throw std::domain_error("wavelength must be > 0");
    double zeta;
    if (visibility_km > 50.0) {
        zeta = 1.6;
    } else if (visibility_km >= 6.0) {
        zeta = 1.3;
    } else {
        zeta = 0.585 * std::cbrt(visibility_km);
    }
    return 3.91 / visibility_km * std::pow(wavelength_m / 550e-9, -zeta);
}

double average_gain(const FsoLinkParams& params, double kappa_per_km) {
    if (!(kappa_per_km >= 0.0)) throw std::domain_error("kappa must be >= 0");
    const double arg = std::sqrt(std::numbers::pi) * params.aperture_diameter_m /
                       (2.0 * std::numbers::sqrt2 * params.divergence_rad * params.distance_m);
    const double geometric = std::erf(arg);
    return geometric * geometric * std::exp(-kappa_per_km * params.distance_m / 1000.0);
}

TurbulenceParams turbulence_params(const FsoLinkParams& params) {
    if (!(params.cn2 > 0.0)) throw std::domain_error("cn2 must be > 0");
    const double k = 2.0 * std::numbers::pi / params.wavelength_m;
    const double L = params.distance_m;
    const double chi2 = 0.5 * params.cn2 * std::pow(k, 7.0 / 6.0) * std::pow(L, 11.0 / 6.0);
    const double theta2 = k * params.aperture_diameter_m * params.aperture_diameter_m / (4.0 * L);
    const double chi_125 = std::pow(chi2, 6.0 / 5.0);  // chi^(12/5)

    const double arg_a = 0.49 * chi2 / std::pow(1.0 + 0.18 * theta2 + 0.56 * chi_125, 7.0 / 6.0);
    const double arg_b = 0.51 * chi2 * std::pow(1.0 + 0.69 * chi_125, -5.0 / 6.0) /
                         std::pow(1.0 + 0.9 * theta2 + 0.62 * theta2 * chi_125, 5.0 / 6.0);

    const TurbulenceParams tp{1.0 / std::expm1(arg_a), 1.0 / std::expm1(arg_b)};
    const auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!ok(tp.alpha) || !ok(tp.beta)) {
        std::ostringstream msg;
        msg << "turbulence parameters out of range (chi2=" << chi2 << ", alpha=" << tp.alpha
            << ", beta=" << tp.beta << ")";
        throw NumericError(msg.str());
    }
    return tp;
}

double gamma_gamma_pdf(const TurbulenceParams& tp, double h) {
    const double a = tp.alpha;
    const double b = tp.beta;
    if (h < 0.0) return 0.0;
    if (h == 0.0) {
        const double lo = std::min(a, b);
        if (lo > 1.0) return 0.0;
        if (lo < 1.0) return std::numeric_limits<double>::infinity();
    }
    const double half = 0.5 * (a + b);
    const double log_pdf = std::log(2.0) + half * std::log(a * b) - std::lgamma(a) - std::lgamma(b) +
                           (half - 1.0) * std::log(h) +
                           log_bessel_k(a - b, 2.0 * std::sqrt(a * b * h));
    return std::exp(log_pdf);
}

double sample_turbulence(const TurbulenceParams& tp, Rng& rng) {
    std::gamma_distribution<double> large(tp.alpha, 1.0 / tp.alpha);
    std::gamma_distribution<double> small(tp.beta, 1.0 / tp.beta);
    const double x = large(rng);
    return x * small(rng);
}

double instantaneous_capacity(const FsoLinkParams& params, double gain, double h) {
    if (!(gain >= 0.0 && gain <= 1.0)) throw std::domain_error("FSO gain must lie in [0, 1]");
    if (!(h >= 0.0)) throw std::domain_error("fading h must be >= 0");
    const double amplitude = params.responsivity * gain * h * params.power_w;
    const double snr = std::numbers::e * amplitude * amplitude /
                       (2.0 * std::numbers::pi * params.noise_variance_a2);
    return 0.5 * params.bandwidth_mhz * std::log1p(snr) / std::numbers::ln2;
}

double average_capacity(const FsoLinkParams& params, double kappa_per_km) {
    const double gain = average_gain(params, kappa_per_km);
    const TurbulenceParams tp = turbulence_params(params);

    // Near-deterministic fading: E[C(h)] - C(1) is O(variance) and the pdf
    // is too narrow for the quadrature to resolve.
    if (tp.scintillation_index() < 1e-10) return instantaneous_capacity(params, gain, 1.0);

    constexpr double kTailMass = 1e-9;
    constexpr double kRelTol = 1e-6;
    const double h_max = truncation_point(tp, kTailMass);
    const auto integrand = [&](double h) {
        const double pdf = gamma_gamma_pdf(tp, h);
        return pdf == 0.0 ? 0.0 : instantaneous_capacity(params, gain, h) * pdf;
    };

    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    double total_err = 0.0;
    double lo = 0.0;
    // Split at the mean so the bulk of the mass sits inside one panel.
    for (double hi : {std::min(1.0, h_max), h_max}) {
        if (hi <= lo) continue;
        double err = 0.0;
        total += gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20, 1e-10, &err);
        total_err += err;
        lo = hi;
    }
    if (!std::isfinite(total) || total_err > kRelTol * std::max(std::abs(total), 1e-300)) {
        std::ostringstream msg;
        msg << "average FSO capacity quadrature did not converge: kappa=" << kappa_per_km
            << "/km alpha=" << tp.alpha << " beta=" << tp.beta << " h_max=" << h_max
            << " estimate=" << total << " error=" << total_err;
        throw NumericError(msg.str());
    }
    return total;
}

}  // namespace fsotrade::fso
