#include "ringpair/transfer.hpp"

#include <cmath>
#include <sstream>

#include "ringpair/errors.hpp"

namespace ringpair {

namespace {

// Smallest denominator magnitude treated as non-singular.
constexpr double kPoleFloor = 1e-300;

bool is_singular(cplx d) { return !(std::abs(d) > kPoleFloor) || !std::isfinite(std::abs(d)); }

void require_unit(const char* what, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << what << " = " << v << " outside [0, 1]";
        throw ValidationError(os.str());
    }
}

cplx shared_denominator(cplx one_minus_a, cplx one_minus_b, cplx ra, cplx rb) {
    return one_minus_a * one_minus_b - ra * rb;
}

}  // namespace

cplx circulation_factor(double rho, double alpha, double theta) {
    require_unit("rho", rho);
    require_unit("alpha", alpha);
    if (rho * alpha >= 1.0) {
        throw PoleError("circulation factor: rho * alpha >= 1 (no round-trip decay)");
    }
    return 1.0 / (1.0 - std::polar(rho * alpha, theta));
}

cplx lossless_transfer(double rho, double theta) {
    require_unit("rho", rho);
    const cplx den = 1.0 - std::polar(rho, theta);
    if (is_singular(den)) throw PoleError("lossless transfer: 1 - rho e^{i theta} = 0");
    return std::polar(1.0, theta) * (1.0 - std::polar(rho, -theta)) / den;
}

cplx classical_lossy_transfer(double rho, double alpha, double theta) {
    require_unit("rho", rho);
    require_unit("alpha", alpha);
    const cplx round = std::polar(alpha, theta);
    const cplx den = 1.0 - rho * round;
    if (is_singular(den)) throw PoleError("lossy transfer: 1 - rho alpha e^{i theta} = 0");
    return (round - rho) / den;
}

double single_mode_noise_magnitude(cplx G) {
    const double g2 = std::norm(G);
    if (g2 > 1.0 + 2e-12) {
        std::ostringstream os;
        os << "|G| = " << std::sqrt(g2) << " exceeds 1";
        throw UnitarityError(os.str());
    }
    return std::sqrt(std::max(0.0, 1.0 - g2));
}

cplx pump_in_ring(const ModeParams& pump_mode, double theta_c, cplx c_in, PumpPoint point) {
    const double rho = pump_mode.rho();
    const cplx den = 1.0 - std::polar(rho, theta_c);
    if (is_singular(den)) throw PoleError("pump in ring: 1 - rho_c e^{i theta_c} = 0");
    const cplx entry = pump_mode.tau() / den * c_in;
    return point == PumpPoint::entry_0plus ? entry : std::polar(1.0, theta_c) * entry;
}

cplx pump_out(const ModeParams& pump_mode, double theta_c, cplx c_in) {
    return lossless_transfer(pump_mode.rho(), theta_c) * c_in;
}

BuildingBlocks building_blocks(const SystemConfig& config, double omega) {
    const cplx ra = config.r_a();
    const cplx rb = config.r_b();
    const cplx xa = config.signal.xi(omega);
    const cplx xb = config.idler.xi(omega);
    BuildingBlocks b;
    b.M = Mat2{1.0, kI * ra, -kI * rb, 1.0};
    b.P_xi = Mat2::diag(xa, xb);
    b.T_rho = Mat2::diag(config.signal.rho(), config.idler.rho());
    b.X_tau = Mat2::diag(config.signal.tau(), config.idler.tau());
    b.xi_a = xa;
    b.xi_b = xb;
    return b;
}

TransferPair output_transfer(const SystemConfig& config, double omega) {
    const double rho_a = config.signal.rho();
    const double rho_b = config.idler.rho();
    const double tau_a = config.signal.tau();
    const double tau_b = config.idler.tau();
    const cplx ra = config.r_a();
    const cplx rb = config.r_b();
    const cplx xa = config.signal.xi(omega);
    const cplx xb = config.idler.xi(omega);
    const cplx one_a = 1.0 - rho_a * xa;
    const cplx one_b = 1.0 - rho_b * xb;

    const cplx D = shared_denominator(one_a, one_b, ra, rb);
    if (is_singular(D)) throw PoleError("output transfer: D(omega) = 0");

    TransferPair p;
    p.D = D;
    p.location = Location::output_bus;
    p.G = Mat2{((xa - rho_a) * one_b + ra * rb * rho_a) / D,
               -kI * ra * tau_a * tau_b * xb / D,
               kI * rb * tau_b * tau_a * xa / D,
               ((xb - rho_b) * one_a + ra * rb * rho_b) / D};
    p.H = Mat2{tau_a * one_b / D, -kI * ra * tau_a / D, kI * rb * tau_b / D, tau_b * one_a / D};
    return p;
}

TransferPair output_transfer_composed(const SystemConfig& config, double omega) {
    const BuildingBlocks b = building_blocks(config, omega);
    const Mat2 N = b.M - b.P_xi * b.T_rho;
    const cplx det = N.det();
    if (is_singular(det)) throw PoleError("output transfer: M - P_xi T_rho is singular");
    TransferPair p;
    p.D = det;
    p.location = Location::output_bus;
    p.H = b.X_tau * N.inverse();
    p.G = p.H * b.P_xi * b.X_tau - b.T_rho;
    return p;
}

TransferPair intracavity_transfer(const SystemConfig& config, double omega) {
    const double tau_a = config.signal.tau();
    const double tau_b = config.idler.tau();
    if (!(tau_a > 0.0) || !(tau_b > 0.0)) {
        throw ValidationError("intracavity transfer needs tau_a, tau_b > 0 (ring coupled to bus)");
    }
    const cplx ra = config.r_a();
    const cplx rb = config.r_b();
    const cplx xa = config.signal.xi(omega);
    const cplx xb = config.idler.xi(omega);
    const cplx one_a = 1.0 - config.signal.rho() * xa;
    const cplx one_b = 1.0 - config.idler.rho() * xb;

    const cplx D = shared_denominator(one_a, one_b, ra, rb);
    if (is_singular(D)) throw PoleError("intracavity transfer: D(omega) = 0");

    TransferPair p;
    p.D = D;
    p.location = Location::intracavity;
    p.G = Mat2{tau_a * one_b * xa / D, -kI * ra * tau_b * xb / D, kI * rb * tau_a * xa / D,
               tau_b * one_a * xb / D};
    p.H = Mat2{one_b / D, -kI * ra / D, kI * rb / D, one_a / D};
    return p;
}

TransferPair intracavity_transfer_composed(const SystemConfig& config, double omega) {
    const double tau_a = config.signal.tau();
    const double tau_b = config.idler.tau();
    if (!(tau_a > 0.0) || !(tau_b > 0.0)) {
        throw ValidationError("intracavity transfer needs tau_a, tau_b > 0 (ring coupled to bus)");
    }
    const BuildingBlocks b = building_blocks(config, omega);
    const TransferPair out = output_transfer_composed(config, omega);
    const Mat2 x_inv = Mat2::diag(1.0 / tau_a, 1.0 / tau_b);
    TransferPair p;
    p.D = out.D;
    p.location = Location::intracavity;
    p.H = x_inv * out.H;
    p.G = p.H * b.P_xi * b.X_tau;
    return p;
}

TransferPair transfer(const SystemConfig& config, double omega, Location location) {
    return location == Location::output_bus ? output_transfer(config, omega)
                                            : intracavity_transfer(config, omega);
}

Mat2 loss_rescaling(const SystemConfig& config) {
    return Mat2::diag(std::sqrt(config.signal.one_minus_alpha_sq()),
                      std::sqrt(config.idler.one_minus_alpha_sq()));
}

Mat2 rescaled_noise_matrix(const TransferPair& pair, const SystemConfig& config) {
    return pair.H * loss_rescaling(config);
}

}  // namespace ringpair
