// picomine: Stratum mining client, benchmark harness, and mock pool server.
#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "picomine/bench.hpp"
#include "picomine/client.hpp"
#include "picomine/log.hpp"
#include "picomine/miner.hpp"
#include "picomine/mock_pool.hpp"
#include "picomine/target.hpp"

namespace {

volatile std::sig_atomic_t g_interrupted = 0;

void on_sigint(int) { g_interrupted = 1; }

picomine::HashImpl impl_from_name(const std::string& name) {
    return name == "naive" ? picomine::HashImpl::Naive : picomine::HashImpl::Optimized;
}

int cmd_bench(int trials, int min_exp, int max_exp, const std::string& impl,
              const std::string& csv_path, bool quiet) {
    using namespace picomine;
    BenchOptions options;
    options.trials = trials;
    options.min_exponent = min_exp;
    options.max_exponent = max_exp;
    options.run_naive = impl == "both" || impl == "naive";
    options.run_optimized = impl == "both" || impl == "optimized";

    auto progress = [&](const HashrateSample& s) {
        if (quiet) return;
        std::fprintf(stderr, "%-9s trial %d  %10llu iterations  %12.6f s  %14.1f H/s%s\n",
                     s.implementation.c_str(), s.trial,
                     static_cast<unsigned long long>(s.iterations), s.elapsed_s, s.hashrate_hs,
                     s.valid ? "" : "  (below timer resolution, ignored)");
    };
    std::vector<HashrateSample> samples = run_bench(options, progress);
    std::string csv = samples_to_csv(samples);

    bool csv_to_stdout = csv_path == "-";
    if (csv_to_stdout) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    } else {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "cannot write %s\n", csv_path.c_str());
            return 1;
        }
        out << csv;
    }

    // the summary is recomputed from the CSV text just written
    BenchReport report = report_from_csv_text(csv);
    std::string formatted = format_report(report);
    std::FILE* sink = csv_to_stdout ? stderr : stdout;
    std::fwrite(formatted.data(), 1, formatted.size(), sink);
    return 0;
}

int cmd_mine(const picomine::MineOptions& options) {
    using namespace picomine;
    MineSummary summary = run_miner(options);
    std::printf("submitted=%llu accepted=%llu rejected=%llu low_difficulty=%llu "
                "stale_dropped=%llu block_solves=%llu hashes=%llu duration_s=%.2f "
                "hashrate_hs=%.1f\n",
                (unsigned long long)summary.submitted, (unsigned long long)summary.accepted,
                (unsigned long long)summary.rejected, (unsigned long long)summary.low_difficulty,
                (unsigned long long)summary.stale_dropped,
                (unsigned long long)summary.block_solves, (unsigned long long)summary.hashes,
                summary.duration_s,
                summary.duration_s > 0 ? double(summary.hashes) / summary.duration_s : 0.0);
    if (summary.auth_failed) {
        std::fprintf(stderr, "authorization failed\n");
        return 2;
    }
    return 0;
}

int cmd_estimate(double difficulty, double hashrate) {
    using namespace picomine;
    double seconds = estimate_expected_seconds(difficulty, hashrate);
    std::printf("expected time to one solution: %s (%.2f seconds)\n",
                format_duration(seconds).c_str(), seconds);
    return 0;
}

int cmd_mockpool(picomine::PoolConfig config) {
    using namespace picomine;
    MockPool pool(std::move(config));
    pool.start();
    std::printf("mock pool listening on 127.0.0.1:%u (Ctrl-C to stop)\n", pool.port());
    std::fflush(stdout);
    std::signal(SIGINT, on_sigint);
    std::signal(SIGTERM, on_sigint);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    pool.stop();
    auto records = pool.submissions();
    size_t accepted = 0;
    for (const auto& r : records)
        if (r.verdict == Verdict::Accepted) ++accepted;
    std::printf("shutting down: %zu submissions, %zu accepted\n", records.size(), accepted);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stratum mining client, hashrate benchmark, and mock pool server"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "debug|info|warn|error")
        ->check(CLI::IsMember({"debug", "info", "warn", "error"}));

    // bench
    auto* bench = app.add_subcommand("bench", "Measure double-SHA-256 hashrate");
    int trials = 4, min_exp = 1, max_exp = 23;
    std::string bench_impl = "both", csv_path = "-";
    bool quiet = false;
    bench->add_option("--trials", trials, "Trials per iteration count")->check(CLI::PositiveNumber);
    bench->add_option("--min-exp", min_exp, "Smallest iteration count is 2^this")
        ->check(CLI::Range(0, 32));
    bench->add_option("--max-exp", max_exp, "Largest iteration count is 2^this")
        ->check(CLI::Range(0, 32));
    bench->add_option("--impl", bench_impl, "naive|optimized|both")
        ->check(CLI::IsMember({"naive", "optimized", "both"}));
    bench->add_option("--csv", csv_path, "CSV output path, or - for stdout");
    bench->add_flag("--quiet", quiet, "Suppress per-sample progress");

    // mine
    auto* mine = app.add_subcommand("mine", "Mine against a Stratum pool");
    picomine::MineOptions mine_options;
    std::string mine_impl = "optimized";
    mine->add_option("--host", mine_options.client.host, "Pool host")->required();
    mine->add_option("--port", mine_options.client.port, "Pool port")->required();
    mine->add_option("--user", mine_options.client.username, "Worker username");
    mine->add_option("--pass", mine_options.client.password, "Worker password");
    mine->add_option("--workers", mine_options.workers, "Concurrent nonce-search workers")
        ->check(CLI::PositiveNumber);
    mine->add_option("--duration", mine_options.max_duration_s, "Stop after this many seconds");
    mine->add_option("--shares", mine_options.max_accepted, "Stop after this many accepted shares");
    mine->add_option("--impl", mine_impl, "naive|optimized")
        ->check(CLI::IsMember({"naive", "optimized"}));
    mine->add_option("--chunk", mine_options.chunk_size, "Nonces per worker slice");
    mine->add_flag("--reconnect", mine_options.reconnect, "Retry dropped connections");
    mine->add_option("--max-reconnects", mine_options.max_reconnects, "Reconnect attempt cap");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Expected time to one solution");
    double difficulty = 0, hashrate = 0;
    estimate->add_option("difficulty", difficulty, "Difficulty")
        ->required()
        ->check(CLI::PositiveNumber);
    estimate->add_option("hashrate", hashrate, "Hashrate in H/s")
        ->required()
        ->check(CLI::PositiveNumber);

    // mockpool; a config file supplies defaults, explicit flags win over it
    auto* mockpool = app.add_subcommand("mockpool", "Run the mock pool server standalone");
    std::string pool_config_path;
    uint16_t pool_port = 3333;
    double pool_difficulty = 1.0, pool_notify_interval = 0.0;
    int pool_e2size = 4, pool_clean_every = 0;
    bool pool_check_credentials = false;
    std::string pool_user = "worker", pool_pass = "x";
    mockpool->add_option("--config", pool_config_path, "key=value config file");
    mockpool->add_option("--port", pool_port, "Listen port (0 = ephemeral)");
    mockpool->add_option("--difficulty", pool_difficulty, "Share difficulty");
    mockpool->add_option("--e2size", pool_e2size, "extranonce2 byte width")
        ->check(CLI::Range(1, 16));
    mockpool->add_flag("--check-credentials", pool_check_credentials,
                       "Reject mismatched username/password");
    mockpool->add_option("--user", pool_user, "Expected username");
    mockpool->add_option("--pass", pool_pass, "Expected password");
    mockpool->add_option("--notify-interval", pool_notify_interval,
                         "Seconds between job rebroadcasts (0 = off)");
    mockpool->add_option("--clean-every", pool_clean_every,
                         "Every Nth rebroadcast sets clean_jobs (0 = never)");

    CLI11_PARSE(app, argc, argv);

    picomine::LogLevel level = picomine::LogLevel::Info;
    if (log_level == "debug") level = picomine::LogLevel::Debug;
    else if (log_level == "warn") level = picomine::LogLevel::Warn;
    else if (log_level == "error") level = picomine::LogLevel::Error;
    picomine::Logger::instance().set_level(level);

    try {
        if (bench->parsed()) return cmd_bench(trials, min_exp, max_exp, bench_impl, csv_path, quiet);
        if (mine->parsed()) {
            mine_options.impl = impl_from_name(mine_impl);
            return cmd_mine(mine_options);
        }
        if (estimate->parsed()) return cmd_estimate(difficulty, hashrate);
        if (mockpool->parsed()) {
            picomine::PoolConfig pool_config;
            if (!pool_config_path.empty())
                pool_config = picomine::load_pool_config(pool_config_path);
            else
                pool_config.port = 3333;
            if (mockpool->count("--port")) pool_config.port = pool_port;
            if (mockpool->count("--difficulty")) pool_config.share_difficulty = pool_difficulty;
            if (mockpool->count("--e2size")) pool_config.extranonce2_size = pool_e2size;
            if (mockpool->count("--user")) pool_config.username = pool_user;
            if (mockpool->count("--pass")) pool_config.password = pool_pass;
            if (mockpool->count("--notify-interval"))
                pool_config.notify_interval_s = pool_notify_interval;
            if (mockpool->count("--clean-every")) pool_config.clean_every = pool_clean_every;
            if (pool_check_credentials) pool_config.check_credentials = true;
            return cmd_mockpool(std::move(pool_config));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
