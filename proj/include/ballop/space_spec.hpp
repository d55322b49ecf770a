#pragma once

#include <stdexcept>
#include <string>

namespace ballop {

enum class SpaceKind { Hardy, Bergman, Dirichlet };

/// Descriptor of one of the three function spaces on the unit ball B_N:
/// Hardy, weighted Bergman with parameter s > -1, or Dirichlet.
/// Hardy and Bergman carry a kernel exponent t (N and N+s+1 respectively);
/// the Dirichlet kernel is logarithmic and has no exponent.
struct SpaceSpec {
    SpaceKind kind = SpaceKind::Hardy;
    int dim = 1;      // N
    double s = 0.0;   // Bergman weight parameter, meaningful only for Bergman

    static SpaceSpec hardy(int n) { return validated({SpaceKind::Hardy, n, 0.0}); }
    static SpaceSpec bergman(int n, double s) { return validated({SpaceKind::Bergman, n, s}); }
    static SpaceSpec dirichlet(int n) { return validated({SpaceKind::Dirichlet, n, 0.0}); }

    bool has_kernel_exponent() const { return kind != SpaceKind::Dirichlet; }

    double kernel_exponent() const {
        switch (kind) {
            case SpaceKind::Hardy: return static_cast<double>(dim);
            case SpaceKind::Bergman: return static_cast<double>(dim) + s + 1.0;
            default: throw std::logic_error("Dirichlet space has no kernel exponent");
        }
    }

    std::string name() const {
        switch (kind) {
            case SpaceKind::Hardy: return "hardy";
            case SpaceKind::Bergman: return "bergman";
            default: return "dirichlet";
        }
    }

    bool operator==(const SpaceSpec&) const = default;

private:
    static SpaceSpec validated(SpaceSpec sp) {
        if (sp.dim < 1) throw std::invalid_argument("space dimension must be >= 1");
        if (sp.kind == SpaceKind::Bergman && sp.s <= -1.0)
            throw std::invalid_argument("Bergman parameter requires s > -1");
        return sp;
    }
};

}  // namespace ballop
