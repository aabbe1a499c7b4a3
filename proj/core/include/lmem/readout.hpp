#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "lmem/kernel.hpp"
#include "lmem/params.hpp"
#include "lmem/transverse.hpp"

namespace lmem {

enum class Direction { forward, backward };

// Transverse-mode context for the retrieval phase factors; with the default
// zero mode every phase is exactly 1.
struct QContext {
    TransverseMode mode;  // transverse wavevector
    double k_signal = 1.0; // rad/m
    double L_meters = 0.0; // dimensional medium length for the phase argument

    double q2_L_over_ks() const { return mode.q2() * L_meters / k_signal; }
};

struct RetrievalResult {
    Direction direction = Direction::forward;
    QContext q;
    double dt = 0.0;
    double Tw_tilde = 0.0;
    double Tr_tilde = 0.0;
    // retrieved field at the output face over t in [0, Tr], units of a_in
    std::vector<std::complex<double>> out_field;
    // |out_field|^2 computed before any global phase is applied, so forward
    // results are bit-identical across q
    std::vector<double> intensity;
    double efficiency = 0.0; // percent, relative to the flat input energy
};

// Retrieval from a stored spin-coherence profile sampled on the table's z
// grid, in the same units as WriteSolution::sigma12 (so
// retrieve(sol.stored_profile(), ...) chains the two stages):
//   forward:  out(t) = e^{-i q^2 L/(2 k_s)} \int_0^L dz' K(t, L - z') s(z')
//   backward: out(t) =   \int_0^L dz' e^{-i q^2 z'/ k_s} K(t, z') s(z')
// with the sine response K(t, Z) = sin t + \int_0^t sin t' Dt(t - t', Z) dt'.
// The backward geometry is the forward one with the profile reversed on the
// grid, which is how it is evaluated.
RetrievalResult retrieve(const std::vector<std::complex<double>>& sigma12_profile,
                         const KernelTable& table, const DimensionlessConfig& config,
                         Direction direction, const QContext& q = {});

// Eff = 100 (1/Tw) \int_0^Tr |out|^2 dt for a flat input of unit amplitude.
double retrieval_efficiency(const RetrievalResult& result, double Tw_tilde);

// Coherences (and the internal field) during reading, from Eqs.-of-motion
// structure with zero input field and the stored profile as the initial
// ground-state coherence.  All three maps share the profile's units:
//   a(t, z)   = \int_0^z dz' s(z') K(t, z - z')
//   s13(t, z) = s(z) sin t - (1/2) \int_0^t cos(t - t') a(t', z) dt'
//   s12(t, z) = s(z) cos t + (1/2) \int_0^t sin(t - t') a(t', z) dt'
// For backward reading the profile is reversed first; z then measures depth
// from the face the read pulse enters.
struct ReadoutCoherences {
    DimensionlessConfig config;
    int rows = 0;
    int cols = 0;
    double dt = 0.0;
    double dz = 0.0;
    std::vector<std::complex<double>> a_field; // z-major
    std::vector<std::complex<double>> sigma12;
    std::vector<std::complex<double>> sigma13;

    std::complex<double> a(int k, int j) const {
        return a_field[static_cast<std::size_t>(j) * rows + k];
    }
    std::complex<double> s12(int k, int j) const {
        return sigma12[static_cast<std::size_t>(j) * rows + k];
    }
    std::complex<double> s13(int k, int j) const {
        return sigma13[static_cast<std::size_t>(j) * rows + k];
    }
};
ReadoutCoherences readout_coherences(const std::vector<std::complex<double>>& sigma12_profile,
                                     const KernelTable& table,
                                     const DimensionlessConfig& config, Direction direction);

// CSV dump of the retrieved series: t_tilde,re_a,im_a,intensity
void export_csv(const RetrievalResult& result, std::ostream& out);

// JSON summary pairing the retrieval with the writing loss it followed.
std::string retrieval_summary_json(const RetrievalResult& result, double L_tilde,
                                   double loss_percent);

} // namespace lmem
