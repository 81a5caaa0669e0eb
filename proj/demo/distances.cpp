// Distances between a few qubit states.
#include <cstdio>

#include "qjsd/qjsd.hpp"

int main()
{
    using namespace qjsd;
    const auto zero = density_from_pure(PureState::basis(2, 0));
    const auto plus = density_from_pure(PureState::normalized({1.0, 1.0}));
    const auto mixed = DensityMatrix::maximally_mixed(2);

    std::printf("QJSD(|0>, I/2)        = %.7f\n", qjsd::qjsd(zero, mixed));
    std::printf("QJSD(|0>, |+>)        = %.7f\n", qjsd::qjsd(zero, plus));
    std::printf("sqrt QJSD(|0>, |+>)   = %.7f\n", qjsd_sqrt(zero, plus));
    std::printf("fidelity(|0>, |+>)    = %.7f\n", fidelity(zero, plus));
    std::printf("D_JS1 lower bound     = %.7f\n", djs1_lower_bound(zero, plus, 8));

    StateSampler sampler(3, 42);
    const auto rho = sample_state(sampler);
    const auto sigma = sample_state(sampler);
    std::printf("random qutrits: QJSD = %.7f, d_H = %.7f\n", qjsd::qjsd(rho, sigma), d_h_closed_form(rho, sigma));
    std::printf("triangle defect (rho, I/3, sigma) = %.7f\n",
                triangle_defect(rho, DensityMatrix::maximally_mixed(3), sigma));
}
