#include "vbmodem/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vbmodem/errors.hpp"
#include "vbmodem/kernels.hpp"

namespace vbmodem::dsp {
namespace {

constexpr double kPi = std::numbers::pi;

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Hamming-windowed ideal low-pass impulse response, unity DC gain.
std::vector<double> windowedSinc(int taps, double cutoffHz, int sampleRate) {
    const int mid = (taps - 1) / 2;
    const double fc = cutoffHz / sampleRate;
    std::vector<double> h(taps);
    double sum = 0.0;
    for (int k = 0; k < taps; ++k) {
        int m = k - mid;
        double ideal = (m == 0) ? 2.0 * fc : std::sin(2.0 * kPi * fc * m) / (kPi * m);
        double w = 0.54 - 0.46 * std::cos(2.0 * kPi * k / (taps - 1));
        h[k] = ideal * w;
        sum += h[k];
    }
    for (double& v : h) v /= sum;
    return h;
}

// Half transition width of the Hamming-windowed design, used to push
// band-pass edges outward so tones at the nominal edges stay in-band.
double halfTransitionHz(int taps, int sampleRate) {
    return 1.65 * sampleRate / taps;
}

}  // namespace

FftPlan::FftPlan(int size) : size_(size) {
    if (!isPowerOfTwo(size) || size < 2) {
        throw InvalidSize("fft size must be a power of two >= 2");
    }
    bitrev_.resize(size);
    std::size_t j = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(size); ++i) {
        bitrev_[i] = j;
        std::size_t bit = size >> 1;
        while (j & bit) {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
    }
    twiddleRe_.resize(size / 2);
    twiddleIm_.resize(size / 2);
    for (int k = 0; k < size / 2; ++k) {
        double angle = -2.0 * kPi * k / size;
        twiddleRe_[k] = std::cos(angle);
        twiddleIm_[k] = std::sin(angle);
    }
}

void FftPlan::forward(std::span<const double> frame, std::vector<double>& re,
                      std::vector<double>& im) const {
    const std::size_t n = static_cast<std::size_t>(size_);
    if (frame.size() > n) throw InvalidSize("frame longer than fft size");

    re.assign(n, 0.0);
    im.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t src = bitrev_[i];
        re[i] = src < frame.size() ? frame[src] : 0.0;
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const double wr = twiddleRe_[k * step];
                const double wi = twiddleIm_[k * step];
                const std::size_t a = start + k;
                const std::size_t b = a + half;
                const double tr = re[b] * wr - im[b] * wi;
                const double ti = re[b] * wi + im[b] * wr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
            }
        }
    }
}

std::vector<double> hannWindow(int n) {
    if (n < 2) throw InvalidSize("hann window needs at least 2 points");
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) {
        w[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n - 1)));
    }
    return w;
}

std::vector<double> fftMagnitudes(std::span<const double> frame, int fftSize) {
    FftPlan plan(fftSize);
    std::vector<double> re, im;
    plan.forward(frame, re, im);
    std::vector<double> mags(fftSize / 2 + 1);
    kernels::complexMagnitude(re.data(), im.data(), mags.data(), mags.size());
    return mags;
}

std::vector<double> normalizeSpectrum(std::vector<double> magnitudes) {
    double peak = kernels::maxValue(magnitudes.data(), magnitudes.size());
    if (peak > 0.0) {
        kernels::scale(magnitudes.data(), magnitudes.data(), 1.0 / peak, magnitudes.size());
    }
    return magnitudes;
}

double binToFreq(std::size_t bin, int sampleRate, int fftSize) {
    return static_cast<double>(bin) * sampleRate / fftSize;
}

std::vector<double> designLowpassFir(int taps, double cutoffHz, int sampleRate) {
    if (taps < 3 || taps % 2 == 0) throw InvalidSize("tap count must be odd and >= 3");
    if (!(cutoffHz > 0.0 && cutoffHz < sampleRate / 2.0)) {
        throw InvalidCutoff("cutoff must lie in (0, Nyquist)");
    }
    return windowedSinc(taps, cutoffHz, sampleRate);
}

std::vector<double> designBandpassFir(int taps, double lowHz, double highHz, int sampleRate) {
    if (taps < 3 || taps % 2 == 0) throw InvalidSize("tap count must be odd and >= 3");
    const double nyquist = sampleRate / 2.0;
    if (!(lowHz > 0.0 && lowHz < highHz && highHz < nyquist)) {
        throw InvalidBand("band edges must satisfy 0 < low < high < Nyquist");
    }
    // Design edges sit half a transition width outside the nominal band so
    // tones at the edges themselves pass with < 1 dB loss.
    const double htw = halfTransitionHz(taps, sampleRate);
    const double lowCut = std::max(lowHz - htw, 0.5 * lowHz);
    const double highCut = std::min(highHz + htw, 0.5 * (highHz + nyquist));
    std::vector<double> lpHigh = windowedSinc(taps, highCut, sampleRate);
    std::vector<double> lpLow = windowedSinc(taps, lowCut, sampleRate);
    for (int k = 0; k < taps; ++k) lpHigh[k] -= lpLow[k];
    return lpHigh;
}

AudioBuffer firFilter(const AudioBuffer& in, std::span<const double> coeffs) {
    if (coeffs.empty() || coeffs.size() % 2 == 0) {
        throw InvalidSize("coefficient count must be odd");
    }
    const std::size_t taps = coeffs.size();
    const std::size_t mid = taps / 2;

    // Symmetric (linear-phase) taps let convolution run as correlation, so
    // each output is one dot product against the zero-padded input.
    std::vector<double> padded(in.size() + 2 * mid, 0.0);
    std::copy(in.samples.begin(), in.samples.end(), padded.begin() + mid);

    AudioBuffer out;
    out.sampleRate = in.sampleRate;
    out.samples.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        out.samples[i] = kernels::dot(coeffs.data(), padded.data() + i, taps);
    }
    return out;
}

AudioBuffer lowPass(const AudioBuffer& in, double cutoffHz) {
    if (!(cutoffHz > 0.0 && cutoffHz < in.sampleRate / 2.0)) {
        throw InvalidCutoff("cutoff must lie in (0, Nyquist)");
    }
    return firFilter(in, designLowpassFir(kLowpassTaps, cutoffHz, in.sampleRate));
}

FrameSpectrum analyzeFramePrefiltered(std::span<const double> frame, const ModemConfig& cfg,
                                      const FftPlan& plan, std::span<const double> window) {
    if (window.size() != frame.size()) throw InvalidSize("window/frame length mismatch");

    FrameSpectrum spec;
    spec.fftSize = plan.size();
    spec.sampleRate = cfg.sampleRate;
    spec.rms = frame.empty()
                   ? 0.0
                   : std::sqrt(kernels::sumSquares(frame.data(), frame.size()) / frame.size());

    std::vector<double> windowed(frame.size());
    kernels::multiply(windowed.data(), frame.data(), window.data(), frame.size());

    std::vector<double> re, im;
    plan.forward(windowed, re, im);
    spec.magnitudes.resize(plan.size() / 2 + 1);
    kernels::complexMagnitude(re.data(), im.data(), spec.magnitudes.data(),
                              spec.magnitudes.size());
    spec.magnitudes = normalizeSpectrum(std::move(spec.magnitudes));

    spec.peakBin = static_cast<std::size_t>(
        std::max_element(spec.magnitudes.begin(), spec.magnitudes.end()) -
        spec.magnitudes.begin());
    spec.peakFreq = binToFreq(spec.peakBin, cfg.sampleRate, plan.size());
    return spec;
}

FrameSpectrum analyzeFrame(std::span<const double> frame, const ModemConfig& cfg) {
    cfg.validate();
    if (frame.size() != static_cast<std::size_t>(cfg.frameSamples())) {
        throw InvalidSize("frame length must equal the configured frame sample count");
    }
    AudioBuffer raw{std::vector<double>(frame.begin(), frame.end()), cfg.sampleRate};
    const double rawRms =
        frame.empty() ? 0.0
                      : std::sqrt(kernels::sumSquares(frame.data(), frame.size()) / frame.size());

    AudioBuffer filtered = lowPass(raw, kDecoderLowpassHz);
    FftPlan plan(cfg.fftSize);
    std::vector<double> window = hannWindow(static_cast<int>(frame.size()));
    FrameSpectrum spec = analyzeFramePrefiltered(filtered.samples, cfg, plan, window);
    spec.rms = rawRms;
    return spec;
}

}  // namespace vbmodem::dsp
