// A quick triangle-inequality audit per dimension, printing the lower tail.
#include <cstdio>

#include "qjsd/qjsd.hpp"

int main()
{
    for (std::size_t n = 2; n <= 4; ++n) {
        qjsd::AuditConfig config;
        config.dim = n;
        config.samples = 5000;
        config.seed = 7;
        const auto report = qjsd::run_audit(config);
        std::printf("N=%zu  violations=%llu  min defect=%.5f  P(defect<0.1)=%.4f\n", n,
                    static_cast<unsigned long long>(report.violations), report.min_defect,
                    report.probability_below(0.1));
    }
}
