#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bizcycle/phase.hpp"

using namespace bizcycle;

// Frozen reference values for the canonical parameter set, produced by an
// independent dense-grid + high-precision Newton implementation.  They pin
// the equilibrium geometry so regressions surface as hard failures.
namespace frozen {
constexpr double kContractionS = -0.466160297706;
constexpr double kContractionH = 0.007623022909;
constexpr double kContractionZ = -0.939444896315;
constexpr double kSaddleS = -0.224064459824;
constexpr double kSaddleH = 0.018539568311;
constexpr double kSaddleZ = -0.811692414228;
constexpr double kExpansionS = 0.645849632823;
constexpr double kExpansionH = 0.057710621393;
constexpr double kExpansionZ = -0.453363772009;

constexpr double kContractionEigRe = -0.01488735;
constexpr double kContractionEigIm = 0.03256388;
constexpr double kContractionEigReal = -0.00050601;
constexpr double kSaddleEigPos = 0.08188766;
constexpr double kExpansionEigRe = -0.06770459;
constexpr double kExpansionEigIm = 0.00704692;
}  // namespace frozen

TEST_CASE("equilibria of the canonical set: count, order, coordinates") {
    Params p;
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 3);

    // sorted by s: contraction, saddle, expansion
    CHECK(eqs[0].classification == StabilityClass::stable_focus_node);
    CHECK(eqs[1].classification == StabilityClass::saddle);
    CHECK(eqs[2].classification == StabilityClass::stable_focus_node);
    CHECK(eqs[0].state.s < 0.0);
    CHECK(eqs[2].state.s > 0.0);

    CHECK(eqs[0].state.s == doctest::Approx(frozen::kContractionS).epsilon(1e-9));
    CHECK(eqs[0].state.h == doctest::Approx(frozen::kContractionH).epsilon(1e-6));
    CHECK(eqs[0].state.z == doctest::Approx(frozen::kContractionZ).epsilon(1e-9));
    CHECK(eqs[1].state.s == doctest::Approx(frozen::kSaddleS).epsilon(1e-9));
    CHECK(eqs[1].state.h == doctest::Approx(frozen::kSaddleH).epsilon(1e-6));
    CHECK(eqs[1].state.z == doctest::Approx(frozen::kSaddleZ).epsilon(1e-9));
    CHECK(eqs[2].state.s == doctest::Approx(frozen::kExpansionS).epsilon(1e-9));
    CHECK(eqs[2].state.h == doctest::Approx(frozen::kExpansionH).epsilon(1e-6));
    CHECK(eqs[2].state.z == doctest::Approx(frozen::kExpansionZ).epsilon(1e-9));
}

TEST_CASE("equilibria satisfy the algebraic line and kill the vector field") {
    Params p;
    for (const auto& e : find_equilibria(p)) {
        const double line_z = std::log(p.b + p.tau_y * p.c2 * (e.state.s - p.s_star));
        CHECK(std::fabs(e.state.z - line_z) <= 1e-10);
        const BoundedDeriv d = bounded_rhs(e.state, 0.0, p);
        CHECK(std::fabs(d.hdot) <= 1e-10);
        CHECK(std::fabs(d.sdot) <= 1e-10);
        CHECK(std::fabs(d.zdot) <= 1e-10);
    }
}

TEST_CASE("equilibrium spectra match the frozen references") {
    Params p;
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 3);

    auto real_parts_sorted = [](const EquilibriumPoint& e) {
        std::vector<double> re;
        for (const auto& lam : e.eigenvalues) re.push_back(lam.real());
        std::sort(re.begin(), re.end());
        return re;
    };

    {  // contraction: complex pair + slow real mode, all stable
        const auto re = real_parts_sorted(eqs[0]);
        CHECK(re[0] == doctest::Approx(frozen::kContractionEigRe).epsilon(1e-4));
        CHECK(re[1] == doctest::Approx(frozen::kContractionEigRe).epsilon(1e-4));
        CHECK(re[2] == doctest::Approx(frozen::kContractionEigReal).epsilon(1e-4));
        double max_im = 0.0;
        for (const auto& lam : eqs[0].eigenvalues) max_im = std::max(max_im, lam.imag());
        CHECK(max_im == doctest::Approx(frozen::kContractionEigIm).epsilon(1e-4));
    }
    {  // saddle: exactly one unstable direction
        const auto re = real_parts_sorted(eqs[1]);
        CHECK(re[2] == doctest::Approx(frozen::kSaddleEigPos).epsilon(1e-4));
        CHECK(re[1] < 0.0);
        CHECK(re[0] < 0.0);
    }
    {  // expansion: complex pair
        const auto re = real_parts_sorted(eqs[2]);
        CHECK(re[0] == doctest::Approx(frozen::kExpansionEigRe).epsilon(1e-4));
        double max_im = 0.0;
        for (const auto& lam : eqs[2].eigenvalues) max_im = std::max(max_im, lam.imag());
        CHECK(max_im == doctest::Approx(frozen::kExpansionEigIm).epsilon(1e-4));
    }
}

TEST_CASE("expansion start lifts the largest-s stable equilibrium") {
    Params p;
    const auto eqs = find_equilibria(p);
    const FullState st = expansion_start(p);
    CHECK(st.p == 0.0);
    CHECK(st.h == eqs[2].state.h);
    CHECK(st.s == eqs[2].state.s);
    CHECK(st.y == doctest::Approx(-eqs[2].state.z).epsilon(1e-15));
}

TEST_CASE("sentiment pitchfork across the critical coupling") {
    SUBCASE("subcritical: single stable root at the origin") {
        const auto roots = sentiment_pitchfork(0.9);
        REQUIRE(roots.size() == 1);
        CHECK(std::fabs(roots[0].s) < 1e-9);
        CHECK(roots[0].stable);
    }
    SUBCASE("supercritical: symmetric outer roots, unstable origin") {
        const auto roots = sentiment_pitchfork(1.1);
        REQUIRE(roots.size() == 3);
        CHECK(roots[0].s < 0.0);
        CHECK(std::fabs(roots[1].s) < 1e-9);
        CHECK(roots[2].s > 0.0);
        CHECK(roots[0].stable);
        CHECK_FALSE(roots[1].stable);
        CHECK(roots[2].stable);
        CHECK(roots[2].s == doctest::Approx(-roots[0].s).epsilon(1e-9));
    }
}

TEST_CASE("plane projection conventions") {
    Params p;
    const PlaneSpec plane{-0.8};
    const double scale = splane_scale(p);
    CHECK(scale == doctest::Approx(std::sqrt(1.0 + p.c1 * p.c1)).epsilon(1e-15));

    // a point already on the plane keeps its s (scaled) and h
    const double s = 0.3, h = -0.4, z = p.c1 * s + plane.C;
    const PlanarPoint pt = project_point(s, h, z, plane, p);
    CHECK(pt.s_prime == doctest::Approx(s * scale).epsilon(1e-12));
    CHECK(pt.h == h);

    // off-plane points move only in (s, z): orthogonal projection
    const PlanarPoint off = project_point(s, h, z + 0.5, plane, p);
    CHECK(off.h == h);
    CHECK(off.s_prime > pt.s_prime);  // tilts toward larger s for z above the plane
}

TEST_CASE("planar flow: equilibria and separatrix in both reference planes") {
    Params p;
    for (double C : {-0.48, -1.11}) {
        const PlaneSpec plane{C};
        const auto eqs = planar_equilibria(plane, p);
        REQUIRE(eqs.size() == 3);
        int stable = 0;
        for (const auto& e : eqs) stable += e.stable ? 1 : 0;
        CHECK(stable == 2);
        CHECK(eqs[0].s < eqs[1].s);
        CHECK(eqs[1].s < eqs[2].s);

        // the restricted field vanishes at each reported equilibrium
        for (const auto& e : eqs) {
            const PlanarDeriv d = planar_rhs(e.s, e.h, plane, p);
            CHECK(std::fabs(d.sdot) < 1e-9);
            CHECK(std::fabs(d.hdot) < 1e-9);
        }

        const auto sep = separatrix(p, plane);
        CHECK(sep.size() > 100);
        for (const auto& pt : sep) {
            // the final backward step may overshoot the |h|=1 stop boundary
            CHECK(std::fabs(pt.h) <= 1.05);
            CHECK(std::fabs(pt.s_prime) <= 1.06 * splane_scale(p));
        }
        // the polyline passes through the saddle
        const auto& saddle = eqs[1];
        double dmin = 1e9;
        for (const auto& pt : sep)
            dmin = std::min(dmin, std::hypot(pt.s_prime - saddle.s * splane_scale(p),
                                             pt.h - saddle.h));
        CHECK(dmin < 1e-4);
    }
}

TEST_CASE("separatrix separates: forward-integration basin oracle") {
    Params p;
    const PlaneSpec plane{-0.8};
    const auto eqs = planar_equilibria(plane, p);
    REQUIRE(eqs.size() == 3);
    std::vector<PlanarEquilibrium> stable;
    for (const auto& e : eqs)
        if (e.stable) stable.push_back(e);
    REQUIRE(stable.size() == 2);

    const auto sep = separatrix(p, plane);
    const double scale = splane_scale(p);

    // separatrix h as a function of s', for side classification
    auto sep_h_at = [&](double s_prime) {
        double best = 1e9, h = 0.0;
        for (const auto& pt : sep) {
            const double d = std::fabs(pt.s_prime - s_prime);
            if (d < best) {
                best = d;
                h = pt.h;
            }
        }
        return h;
    };

    int agree = 0, total = 0;
    for (int i = 0; i < 24; ++i) {
        for (int j = 0; j < 16; ++j) {
            const double s = -0.95 + 1.9 * i / 23.0;
            const double h = -0.95 + 1.9 * j / 15.0;
            const double margin = h - sep_h_at(s * scale);
            if (std::fabs(margin) < 0.05) continue;  // skip the boundary band
            const int label = planar_basin_label(s, h, plane, p, stable);
            if (label < 0) continue;
            // expansion attractor (larger s) sits below the separatrix sheet
            const int expected = margin > 0.0 ? 0 : 1;
            const bool expansion_is_1 = stable[1].s > stable[0].s;
            const int expected_idx = expansion_is_1 ? 1 - expected : expected;
            agree += (label == expected_idx) ? 1 : 0;
            ++total;
        }
    }
    REQUIRE(total > 200);
    CHECK(static_cast<double>(agree) / total >= 0.98);
}

TEST_CASE("barrier heights: frozen values and cross-plane ordering") {
    Params p;
    const auto bh = barrier_heights(p, {PlaneSpec{-0.48}, PlaneSpec{-1.11}});
    REQUIRE(bh.size() == 2);

    CHECK(bh[0].contraction == doctest::Approx(0.0973581).epsilon(1e-4));
    CHECK_FALSE(bh[0].contraction_clamped);
    CHECK(bh[0].expansion == doctest::Approx(1.1805133).epsilon(1e-4));
    CHECK(bh[0].expansion_clamped);  // no crossing within |h| <= 1 in the upper plane

    CHECK(bh[1].expansion == doctest::Approx(0.6298208).epsilon(1e-4));
    CHECK_FALSE(bh[1].expansion_clamped);
    CHECK(bh[1].contraction == doctest::Approx(0.4663041).epsilon(1e-4));
    CHECK_FALSE(bh[1].contraction_clamped);

    // moving from the upper to the lower plane lowers the expansion-side
    // barrier and raises the contraction-side one
    CHECK(bh[1].expansion < bh[0].expansion);
    CHECK(bh[0].contraction < bh[1].contraction);
}

TEST_CASE("phase portrait: fan lands on attractors and stays near the plane") {
    Params p;
    const PlaneSpec plane{-0.8};
    const PhasePortrait portrait = phase_portrait(p, plane, 16);
    REQUIRE(portrait.fan.size() >= 16);
    CHECK(portrait.separatrix.size() > 100);
    CHECK(portrait.planar_equilibria.size() == 3);
    CHECK(portrait.equilibrium_projections.size() == 3);  // all 3-D equilibria, projected

    int captured = 0;
    for (const auto& traj : portrait.fan) {
        CHECK(traj.points.size() > 2);
        if (traj.attractor_index >= 0) ++captured;
    }
    CHECK(captured >= static_cast<int>(portrait.fan.size()) / 2);
}

TEST_CASE("degenerate parameter sets fail loudly") {
    Params p;
    p.beta1 = 0.2;
    p.beta2 = 0.0;  // sentiment decouples; single equilibrium, no saddle
    const auto eqs = find_equilibria(p);
    CHECK(eqs.size() == 1);
    CHECK_THROWS_AS(separatrix(p, PlaneSpec{-0.8}), std::runtime_error);
}
