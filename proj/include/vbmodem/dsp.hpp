// Decoder signal-processing primitives: FIR filters, Hann window, radix-2
// FFT, magnitude spectra and peak-bin frequency estimation.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vbmodem/audio.hpp"
#include "vbmodem/modem_config.hpp"

namespace vbmodem::dsp {

// Fixed decoder filter choices: a 65-tap windowed-sinc low-pass above the
// highest payload tone, and a 201-tap band-pass for the channel simulator.
inline constexpr double kDecoderLowpassHz = 1800.0;
inline constexpr int kLowpassTaps = 65;
inline constexpr int kBandpassTaps = 201;

struct FrameSpectrum {
    std::vector<double> magnitudes;  // normalized, length fftSize/2 + 1
    int fftSize = 0;
    int sampleRate = 0;
    std::size_t peakBin = 0;
    double peakFreq = 0.0;
    double rms = 0.0;
};

// Radix-2 FFT with precomputed twiddles and bit-reversal table; reuse one
// plan across frames of the same size.
class FftPlan {
  public:
    explicit FftPlan(int size);  // throws InvalidSize unless a power of two >= 2
    int size() const { return size_; }

    // Forward transform of a real frame, zero-padded to the plan size.
    // Throws InvalidSize if the frame is longer than the plan.
    void forward(std::span<const double> frame, std::vector<double>& re,
                 std::vector<double>& im) const;

  private:
    int size_;
    std::vector<std::size_t> bitrev_;
    std::vector<double> twiddleRe_;
    std::vector<double> twiddleIm_;
};

std::vector<double> hannWindow(int n);  // n >= 2

// Magnitudes of the non-redundant bins (0..N/2) of the zero-padded frame.
std::vector<double> fftMagnitudes(std::span<const double> frame, int fftSize);

// Divides by the maximum entry; an all-zero spectrum is returned unchanged.
std::vector<double> normalizeSpectrum(std::vector<double> magnitudes);

double binToFreq(std::size_t bin, int sampleRate, int fftSize);

// Windowed-sinc FIR design (Hamming window, odd tap count, unity passband).
std::vector<double> designLowpassFir(int taps, double cutoffHz, int sampleRate);
std::vector<double> designBandpassFir(int taps, double lowHz, double highHz, int sampleRate);

// Zero-padded convolution with group-delay compensation: output has the
// same length and alignment as the input. Coefficient count must be odd.
AudioBuffer firFilter(const AudioBuffer& in, std::span<const double> coeffs);

AudioBuffer lowPass(const AudioBuffer& in, double cutoffHz);  // throws InvalidCutoff

// Full per-frame pipeline: low-pass, Hann window, FFT magnitudes,
// normalization, peak pick. RMS is computed on the raw input frame.
// The frame must be exactly cfg.frameSamples() long.
FrameSpectrum analyzeFrame(std::span<const double> frame, const ModemConfig& cfg);

// Same analysis minus the low-pass stage, for callers that filter whole
// buffers up front. The window must match the frame length; the frame may
// be shorter than the plan (zero-padded).
FrameSpectrum analyzeFramePrefiltered(std::span<const double> frame, const ModemConfig& cfg,
                                      const FftPlan& plan, std::span<const double> window);

}  // namespace vbmodem::dsp
