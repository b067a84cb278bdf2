#ifndef QSCATTER_REFERENCE_H
#define QSCATTER_REFERENCE_H

#include <span>
#include <vector>

#include "qscatter/quantum_state.h"

namespace qscatter::reference {

/// O(N^2) unitary DFT with the exp(-2 pi i j k / N) sign.
std::vector<Amplitude> direct_dft(std::span<const Amplitude> amps);
std::vector<Amplitude> direct_idft(std::span<const Amplitude> amps);

/// exp(-i tau gamma [(2 pi)^2 K^2 + u]) by dense Hermitian diagonalization.
/// The kinetic term is built in the momentum basis and rotated with the DFT.
std::vector<Amplitude> dense_evolve(std::span<const Amplitude> psi, std::span<const double> potential, double gamma, double tau);

/// Free evolution, diagonal in momentum: exact for u = 0.
std::vector<Amplitude> free_evolve(std::span<const Amplitude> psi, double gamma, double tau);

double max_abs_diff(std::span<const Amplitude> a, std::span<const Amplitude> b);

}  // namespace qscatter::reference

#endif
