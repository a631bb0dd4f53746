#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frx {

/// Which variable set is stored at the solution points, and which gradient
/// pathway feeds the viscous flux.
///   A: primitives (rho, u, v, w, p), gradients of primitives
///   B: conserved (rho, rho u, rho v, rho w, E), gradients after converting to primitives
///   C: conserved, gradients of conserved mapped by the product rule
///   D: mixed (rho, rho u, rho v, rho w, p), gradients after converting to primitives
enum class Scheme { A, B, C, D };

enum class Precision { fp32, fp64 };

inline constexpr std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::A: return "A";
    case Scheme::B: return "B";
    case Scheme::C: return "C";
    case Scheme::D: return "D";
    }
    return "?";
}

inline constexpr std::string_view to_string(Precision p) {
    return p == Precision::fp32 ? "fp32" : "fp64";
}

/// A state with non-positive (or NaN) density or pressure.  Location fields
/// are -1 when the failing evaluation was pointwise.
class NonphysicalState : public std::runtime_error {
public:
    explicit NonphysicalState(const std::string& what, long element = -1, long node = -1,
                              std::string scheme = {})
        : std::runtime_error(compose(what, element, node, scheme)),
          element_(element), node_(node), scheme_(std::move(scheme)) {}

    long element() const noexcept { return element_; }
    long node() const noexcept { return node_; }
    const std::string& scheme() const noexcept { return scheme_; }

private:
    static std::string compose(const std::string& what, long element, long node,
                               const std::string& scheme) {
        std::string msg = "nonphysical state: " + what;
        if (element >= 0) msg += " (element " + std::to_string(element);
        if (node >= 0) msg += ", node " + std::to_string(node);
        if (element >= 0) msg += ")";
        if (!scheme.empty()) msg += " [scheme " + scheme + "]";
        return msg;
    }

    long element_;
    long node_;
    std::string scheme_;
};

inline void set_worker_count([[maybe_unused]] int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

/// Runs body(i) for i in [0, n).  Iterations must write disjoint data.
/// The first exception thrown by any iteration is rethrown after the loop.
template <class Body>
void parallel_for(long n, Body&& body) {
    std::exception_ptr error;
    std::mutex guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            std::lock_guard lock(guard);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace frx
