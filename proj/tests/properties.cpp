#include "properties.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "roofline/errors.hpp"
#include "roofline/ingest.hpp"
#include "roofline/metrics.hpp"
#include "roofline/model.hpp"

namespace roofline::testing {

namespace {

using Rng = std::mt19937_64;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// log-uniform in [lo, hi]
double log_uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

std::uint64_t counter(Rng& rng, std::uint64_t lo = 1, std::uint64_t hi = 1ULL << 40) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

int group(Rng& rng) { return std::bernoulli_distribution(0.5)(rng) ? 32 : 64; }

// A check returns an empty string on success, otherwise a description.
using Check = std::function<std::string(Rng&)>;

PropertyResult run_one(const std::string& name, std::uint64_t seed, int cases, const Check& check) {
    PropertyResult r{name, 0, 0, {}};
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
        ++r.cases;
        std::string msg;
        try {
            msg = check(rng);
        } catch (const std::exception& e) {
            msg = std::string("threw ") + e.what();
        }
        if (!msg.empty()) {
            if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + msg;
        }
    }
    return r;
}

template <typename... Ts>
std::string fail(const Ts&... parts) {
    std::ostringstream os;
    os.precision(17);
    (os << ... << parts);
    return os.str();
}

RooflineModel random_model(Rng& rng, double peak, double bw) {
    RooflineModel m;
    m.gpu.name = "X";
    m.ceilings.peak_gips = peak;
    m.ceilings.bandwidth_gbps = bw;
    m.intensity_mode = IntensityMode::ClassicPerByte;
    m.ridge_intensity = peak / bw;
    (void)rng;
    return m;
}

std::string random_name(Rng& rng) {
    static const std::string alphabet = "abcXYZ_09<>:, \"'()";
    const auto len = std::uniform_int_distribution<int>(1, 24)(rng);
    std::string s;
    for (int i = 0; i < len; ++i)
        s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    // names are read back trimmed
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s.empty() ? "k" : s;
}

}  // namespace

std::vector<PropertyResult> run_properties(std::uint64_t seed, int cases) {
    std::vector<PropertyResult> out;
    std::uint64_t n = 0;
    auto add = [&](const std::string& name, const Check& check) { out.push_back(run_one(name, seed + 7919 * ++n, cases, check)); };

    add("intensity_performance x bytes == achieved_gips x 1e9", [](Rng& rng) {
        const auto inst = counter(rng);
        const int g = group(rng);
        const double br = log_uniform(rng, 1, 1e13), bw = log_uniform(rng, 1, 1e13);
        const double t = log_uniform(rng, 1e-7, 1e3);
        const double lhs = intensity_performance(inst, g, br, bw, t) * (br + bw);
        const double rhs = achieved_gips(inst, g, t) * 1e9;
        return rel(lhs, rhs) <= 1e-12 ? "" : fail(lhs, " vs ", rhs);
    });

    add("halving runtime doubles GIPS", [](Rng& rng) {
        const auto inst = counter(rng);
        const int g = group(rng);
        const double t = log_uniform(rng, 1e-7, 1e3);
        const double a = achieved_gips(inst, g, t), b = achieved_gips(inst, g, t / 2);
        return b == 2 * a ? "" : fail(b, " != 2 x ", a);
    });

    add("GIPS scales with 1 / group size", [](Rng& rng) {
        const auto inst = counter(rng);
        const double t = log_uniform(rng, 1e-7, 1e3);
        const double warp = achieved_gips(inst, 32, t), wave = achieved_gips(inst, 64, t);
        return rel(warp, 2 * wave) <= 1e-12 ? "" : fail(warp, " vs 2 x ", wave);
    });

    add("one more VALU adds four instructions", [](Rng& rng) {
        const auto v = counter(rng, 0, 1ULL << 60), s = counter(rng, 0, 1ULL << 60);
        const auto d = total_instructions_amd(v + 1, s) - total_instructions_amd(v, s);
        return d == 4 ? "" : fail("difference ", d);
    });

    add("classic intensity == intensity_performance x runtime", [](Rng& rng) {
        const auto inst = counter(rng);
        const int g = group(rng);
        const double br = log_uniform(rng, 1, 1e13), bw = log_uniform(rng, 1, 1e13);
        const double t = log_uniform(rng, 1e-7, 1e3);
        const double a = classic_intensity(inst, g, br + bw), b = intensity_performance(inst, g, br, bw, t) * t;
        return rel(a, b) <= 1e-12 ? "" : fail(a, " vs ", b);
    });

    add("attainable GIPS is continuous at the ridge", [](Rng& rng) {
        const double peak = log_uniform(rng, 1, 1e4), bw = log_uniform(rng, 10, 1e5);
        const auto m = random_model(rng, peak, bw);
        const double r = m.ridge_intensity;
        if (attainable_gips(m, r) != peak) return fail("at ridge ", attainable_gips(m, r));
        const double eps = log_uniform(rng, 1e-12, 1e-6);
        const double below = attainable_gips(m, r * (1 - eps)), above = attainable_gips(m, r * (1 + eps));
        if (above != peak) return fail("above ridge ", above);
        if (below > peak || rel(below, peak) > 2 * eps) return fail("below ridge ", below, " eps ", eps);
        // and monotone across it
        const double x = log_uniform(rng, r * 1e-3, r * 1e3);
        if (attainable_gips(m, x) > attainable_gips(m, x * 1.5)) return fail("not monotone at ", x);
        return std::string();
    });

    add("classify is invariant under scaling peak and bandwidth together", [](Rng& rng) {
        const double peak = log_uniform(rng, 1, 1e4), bw = log_uniform(rng, 10, 1e5);
        const double k = log_uniform(rng, 1e-3, 1e3);
        const auto a = random_model(rng, peak, bw), b = random_model(rng, peak * k, bw * k);
        double x = 0;
        do {
            x = log_uniform(rng, a.ridge_intensity * 1e-2, a.ridge_intensity * 1e2);
        } while (rel(x, a.ridge_intensity) < 1e-9);  // a rounding-level tie can flip either way
        const AchievedPoint p{"k", 1.0, x, IntensityMode::ClassicPerByte, MemoryLevel::HBM};
        const auto ca = classify(p, a), cb = classify(p, b);
        return ca == cb ? "" : fail("x=", x, " ", to_string(ca), " vs ", to_string(cb));
    });

    add("GTXN/s x 32 == GB/s", [](Rng& rng) {
        const double gbps = log_uniform(rng, 1e-3, 1e6);
        return gbps_to_gtxns(gbps) * 32 == gbps ? "" : fail(gbps);
    });

    add("rocProf CSV round trip", [](Rng& rng) {
        static const std::vector<std::string> keys{"DurationNs", "FETCH_SIZE", "WRITE_SIZE", "SQ_INSTS_VALU",
                                                   "SQ_INSTS_SALU", "gpu-id", "grd"};
        std::vector<RawKernelRecord> recs(std::uniform_int_distribution<int>(1, 6)(rng));
        for (auto& r : recs) {
            r.kernel_name = random_name(rng);
            r.metric_values["DurationNs"] = std::to_string(counter(rng, 1, 1ULL << 50));
            for (const auto& k : keys) {
                if (k == "DurationNs" || std::bernoulli_distribution(0.3)(rng)) continue;
                std::ostringstream v;
                v.precision(17);
                v << log_uniform(rng, 1e-3, 1e12);
                r.metric_values[k] = v.str();
            }
        }
        const auto text = serialize_rocprof_csv(recs);
        const auto back = parse_rocprof_csv(text);
        return back == recs ? "" : fail("mismatch for\n", text);
    });

    add("AMD bytes_read / 1024 == FETCH_SIZE", [](Rng& rng) {
        RawKernelRecord r;
        r.kernel_name = "k";
        const double kb = std::round(log_uniform(rng, 1, 1e10) * 100) / 100;
        std::ostringstream v;
        v.precision(17);
        v << kb;
        r.metric_values = {{"DurationNs", "1000"}, {"FETCH_SIZE", v.str()}, {"WRITE_SIZE", "1"},
                           {"SQ_INSTS_VALU", std::to_string(counter(rng))}, {"SQ_INSTS_SALU", "0"}};
        const auto p = normalize(r);
        return p.bytes_read && *p.bytes_read / 1024 == kb ? "" : fail(v.str(), " -> ", p.bytes_read.value_or(-1));
    });

    add("model JSON round trip", [](Rng& rng) {
        RooflineModel m = random_model(rng, log_uniform(rng, 1, 1e4), log_uniform(rng, 10, 1e5));
        m.gpu = GpuSpec{"G", Vendor::NVIDIA, 80, 4, 1, 1.53, 32, 900};
        m.ceilings.bandwidth_source = BandwidthSource::Measured;
        const int n = std::uniform_int_distribution<int>(0, 5)(rng);
        for (int i = 0; i < n; ++i)
            m.points.push_back({random_name(rng), log_uniform(rng, 1e-3, 1e3), log_uniform(rng, 1e-4, 1e2),
                                m.intensity_mode, MemoryLevel::HBM});
        return model_from_json(model_to_json(m)) == m ? "" : fail(model_to_json(m));
    });

    return out;
}

}  // namespace roofline::testing
