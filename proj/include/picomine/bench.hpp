// Hashrate benchmark: a fixed header prefix, an unreachable target, and a
// doubling iteration schedule, timed per trial. The CSV is the primary
// product; every report number is recomputed from it, never from live state.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "picomine/sha256.hpp"
#include "picomine/work.hpp"

namespace picomine {

struct HashrateSample {
    std::string implementation;  // "naive" or "optimized"
    int trial = 0;               // 1-based
    uint64_t iterations = 0;
    double elapsed_s = 0.0;
    double hashrate_hs = 0.0;
    bool valid = false;  // false when the clock resolution makes the sample unusable
};

struct BenchOptions {
    int trials = 4;
    int min_exponent = 1;   // first iteration count is 2^min_exponent
    int max_exponent = 23;  // last is 2^max_exponent
    bool run_naive = true;
    bool run_optimized = true;
};

inline const char* impl_name(HashImpl impl) {
    return impl == HashImpl::Naive ? "naive" : "optimized";
}

// Arbitrary fixed 76 bytes; only timing matters, so any constant works.
inline HeaderPrefix bench_header_prefix() {
    HeaderPrefix prefix;
    for (size_t i = 0; i < prefix.size(); ++i)
        prefix[i] = static_cast<uint8_t>(i * 31 + 7);
    return prefix;
}

// Samples below this elapsed time carry too much clock noise to average.
inline constexpr double kMinValidElapsedS = 1e-3;

inline std::vector<HashrateSample> run_bench(
    const BenchOptions& options,
    const std::function<void(const HashrateSample&)>& progress = nullptr) {
    if (options.min_exponent < 0 || options.max_exponent > 32 ||
        options.min_exponent > options.max_exponent)
        throw std::invalid_argument("exponent range must satisfy 0 <= min <= max <= 32");
    if (options.trials < 1) throw std::invalid_argument("need at least one trial");

    HeaderPrefix prefix = bench_header_prefix();
    Target256 unreachable = Target256::zero();  // no hash can meet it: full budget burned
    std::vector<HashrateSample> samples;
    std::vector<HashImpl> impls;
    if (options.run_naive) impls.push_back(HashImpl::Naive);
    if (options.run_optimized) impls.push_back(HashImpl::Optimized);

    for (HashImpl impl : impls) {
        for (int trial = 1; trial <= options.trials; ++trial) {
            for (int e = options.min_exponent; e <= options.max_exponent; ++e) {
                uint64_t iterations = uint64_t{1} << e;
                auto t0 = std::chrono::steady_clock::now();
                SearchOutcome outcome = search_nonce(prefix, unreachable, 0, iterations, impl);
                auto t1 = std::chrono::steady_clock::now();
                double elapsed = std::chrono::duration<double>(t1 - t0).count();
                HashrateSample sample;
                sample.implementation = impl_name(impl);
                sample.trial = trial;
                sample.iterations = outcome.hashes_attempted;
                sample.elapsed_s = elapsed;
                sample.hashrate_hs = elapsed > 0 ? double(iterations) / elapsed : 0.0;
                sample.valid = elapsed >= kMinValidElapsedS;
                if (progress) progress(sample);
                samples.push_back(std::move(sample));
            }
        }
    }
    return samples;
}

// ---- CSV ---------------------------------------------------------------

inline constexpr const char* kCsvHeader = "implementation,trial,iterations,elapsed_s,hashrate_hs,valid";

inline std::string samples_to_csv(const std::vector<HashrateSample>& samples) {
    std::string out = kCsvHeader;
    out += '\n';
    char buf[160];
    for (const HashrateSample& s : samples) {
        // %.17g survives a text round trip bit-exactly for doubles
        std::snprintf(buf, sizeof buf, "%s,%d,%llu,%.17g,%.17g,%d\n", s.implementation.c_str(),
                      s.trial, static_cast<unsigned long long>(s.iterations), s.elapsed_s,
                      s.hashrate_hs, s.valid ? 1 : 0);
        out += buf;
    }
    return out;
}

inline std::vector<HashrateSample> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || (line != kCsvHeader && line != std::string(kCsvHeader) + "\r"))
        throw std::runtime_error("bad CSV header");
    std::vector<HashrateSample> samples;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6)
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 6 fields");
        HashrateSample s;
        s.implementation = fields[0];
        s.trial = std::stoi(fields[1]);
        s.iterations = std::stoull(fields[2]);
        s.elapsed_s = std::strtod(fields[3].c_str(), nullptr);
        s.hashrate_hs = std::strtod(fields[4].c_str(), nullptr);
        s.valid = fields[5] == "1";
        samples.push_back(std::move(s));
    }
    return samples;
}

// ---- report ------------------------------------------------------------

struct Stats {
    double avg = 0.0;
    double best = 0.0;   // max
    double worst = 0.0;  // min
};

struct BenchRow {
    uint64_t iterations = 0;
    std::optional<double> naive_mean;      // mean hashrate over valid trials
    std::optional<double> optimized_mean;  // absent when invalid in every trial
    std::optional<double> speedup;         // optimized / naive, when both exist
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::optional<Stats> naive;      // over per-iteration-count means
    std::optional<Stats> optimized;
    std::optional<Stats> speedup;    // over per-row ratios
};

namespace detail {

inline Stats stats_over(const std::vector<double>& values) {
    Stats st;
    double sum = 0.0;
    st.best = values.front();
    st.worst = values.front();
    for (double v : values) {
        sum += v;
        st.best = std::max(st.best, v);
        st.worst = std::min(st.worst, v);
    }
    st.avg = sum / double(values.size());
    return st;
}

}  // namespace detail

inline BenchReport build_report(const std::vector<HashrateSample>& samples) {
    // (iterations, implementation) -> valid hashrates in sample order
    std::map<uint64_t, std::map<std::string, std::vector<double>>> cells;
    for (const HashrateSample& s : samples) {
        if (s.implementation != "naive" && s.implementation != "optimized")
            throw std::runtime_error("unknown implementation: " + s.implementation);
        if (s.valid) cells[s.iterations][s.implementation].push_back(s.hashrate_hs);
        else cells[s.iterations];  // keep the row visible even if everything was invalid
    }

    BenchReport report;
    std::vector<double> naive_means, optimized_means, speedups;
    for (const auto& [iterations, by_impl] : cells) {
        BenchRow row;
        row.iterations = iterations;
        auto mean_of = [&](const char* impl) -> std::optional<double> {
            auto it = by_impl.find(impl);
            if (it == by_impl.end() || it->second.empty()) return std::nullopt;
            double sum = 0.0;
            for (double v : it->second) sum += v;
            return sum / double(it->second.size());
        };
        row.naive_mean = mean_of("naive");
        row.optimized_mean = mean_of("optimized");
        if (row.naive_mean && row.optimized_mean)
            row.speedup = *row.optimized_mean / *row.naive_mean;
        if (!row.naive_mean && !row.optimized_mean) continue;  // invalid in all trials: dropped
        if (row.naive_mean) naive_means.push_back(*row.naive_mean);
        if (row.optimized_mean) optimized_means.push_back(*row.optimized_mean);
        if (row.speedup) speedups.push_back(*row.speedup);
        report.rows.push_back(row);
    }
    if (!naive_means.empty()) report.naive = detail::stats_over(naive_means);
    if (!optimized_means.empty()) report.optimized = detail::stats_over(optimized_means);
    if (!speedups.empty()) report.speedup = detail::stats_over(speedups);
    return report;
}

// The canonical path: whatever was written to disk is what gets summarized.
inline BenchReport report_from_csv_text(const std::string& text) {
    return build_report(parse_csv(text));
}

inline std::string format_report(const BenchReport& report) {
    std::ostringstream out;
    char buf[200];
    out << "iterations        naive H/s    optimized H/s   speedup\n";
    for (const BenchRow& row : report.rows) {
        auto cell = [&](const std::optional<double>& v) -> std::string {
            if (!v) return "            -";
            char b[40];
            std::snprintf(b, sizeof b, "%13.0f", *v);
            return b;
        };
        std::string speed = "      -";
        if (row.speedup) {
            char b[40];
            std::snprintf(b, sizeof b, "%6.2fx", *row.speedup);
            speed = b;
        }
        std::snprintf(buf, sizeof buf, "%10llu    %s    %s   %s\n",
                      static_cast<unsigned long long>(row.iterations),
                      cell(row.naive_mean).c_str(), cell(row.optimized_mean).c_str(),
                      speed.c_str());
        out << buf;
    }
    auto block = [&](const char* name, const std::optional<Stats>& st, const char* unit) {
        if (!st) return;
        std::snprintf(buf, sizeof buf, "%s: avg %.2f%s, best %.2f%s, worst %.2f%s\n", name,
                      st->avg, unit, st->best, unit, st->worst, unit);
        out << buf;
    };
    out << "\n";
    block("naive hashrate", report.naive, " H/s");
    block("optimized hashrate", report.optimized, " H/s");
    block("speedup", report.speedup, "x");
    return out.str();
}

// Largest sensible unit, two decimals. A year here is 365 days.
inline std::string format_duration(double seconds) {
    const double minute = 60, hour = 3600, day = 86400, year = 365.0 * day;
    char buf[64];
    if (seconds < minute) std::snprintf(buf, sizeof buf, "%.2f seconds", seconds);
    else if (seconds < hour) std::snprintf(buf, sizeof buf, "%.2f minutes", seconds / minute);
    else if (seconds < day) std::snprintf(buf, sizeof buf, "%.2f hours", seconds / hour);
    else if (seconds < year) std::snprintf(buf, sizeof buf, "%.2f days", seconds / day);
    else std::snprintf(buf, sizeof buf, "%.2f years", seconds / year);
    return buf;
}

}  // namespace picomine
