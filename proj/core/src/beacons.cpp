#include "ltvobs/beacons.hpp"

#include <cmath>

namespace ltvobs {

BeaconConfig BeaconConfig::make(const std::vector<Vector>& beacons,
                                const Vector& alpha) {
    if (beacons.empty()) {
        throw ConfigError("BeaconConfig: at least one beacon required");
    }
    const int n = static_cast<int>(beacons.front().size());
    if (n != 2 && n != 3) {
        throw ConfigError("BeaconConfig: spatial dimension must be 2 or 3");
    }
    const int l = static_cast<int>(beacons.size());

    BeaconConfig cfg;
    cfg.dim = n;
    cfg.Z.resize(n, l);
    for (int i = 0; i < l; ++i) {
        if (beacons[static_cast<size_t>(i)].size() != n) {
            throw ConfigError("BeaconConfig: inconsistent beacon dimensions");
        }
        cfg.Z.col(i) = beacons[static_cast<size_t>(i)];
    }

    if (alpha.size() == 0) {
        cfg.alpha = Vector::Constant(l, 1.0 / l);
    } else {
        if (alpha.size() != l) {
            throw ConfigError("BeaconConfig: alpha length must match beacon count");
        }
        if (std::abs(alpha.sum() - 1.0) > 1e-12) {
            throw ConfigError("BeaconConfig: alpha must sum to 1");
        }
        cfg.alpha = alpha;
    }
    return cfg;
}

}  // namespace ltvobs
