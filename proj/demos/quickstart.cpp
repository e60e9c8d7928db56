// Minimal tour: constants on Z^2, contour counts around the origin, and one
// exact finite-connectivity value.
#include <cstdio>

#include "percoiso/contours.hpp"
#include "percoiso/families.hpp"
#include "percoiso/isoperimetry.hpp"
#include "percoiso/percolation.hpp"

int main() {
    auto g = perco::make_family("zd:2");
    auto w = perco::Window::ball(g, g->root(), 10);

    auto R = perco::estimate_R(w, 4);
    auto C = perco::estimate_C(w, 4);
    std::printf("Z^2, sets up to 4 cells:  R-hat = %llu/%llu = %.4f   C-hat = %.4f\n",
                (unsigned long long)R.num, (unsigned long long)R.den, R.value, C.value);

    auto counts = perco::enumerate_contours(w, {w.index_of(g->root())}, 8,
                                            [](const perco::Contour&) {});
    std::printf("contours around the origin (certified=%d):\n", counts.certified ? 1 : 0);
    for (auto& [n, c] : counts.count_by_size)
        std::printf("  |gamma| = %llu : %llu\n", (unsigned long long)n, (unsigned long long)c);

    auto line = perco::make_family("line");
    auto path = perco::window_from_descriptor(line, "path:4");
    auto phi = perco::exact_phi_f(path, perco::VertexId{1}, perco::VertexId{2}, 0.5);
    std::printf("line path:4, phi(v1,v2; p=1/2) = %.6Lf\n", phi.value);
    return 0;
}
