// Acceptance gate: every release-blocking property, one PASS/FAIL line each.
// Exit status is the number of failed checks.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "picomine/bench.hpp"
#include "picomine/client.hpp"
#include "picomine/miner.hpp"
#include "picomine/mock_pool.hpp"
#include "picomine/sha256.hpp"
#include "picomine/target.hpp"
#include "picomine/work.hpp"

using namespace picomine;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, bool ok, const std::string& what) {
    std::printf("[%s] %d: %s\n", ok ? "PASS" : "FAIL", number, what.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string hex_of(const Digest32& d) {
    return bytes_to_hex(std::vector<uint8_t>(d.begin(), d.end()));
}

// ---- 1: known-answer vectors ------------------------------------------

void criterion_1() {
    auto t0 = clock_type::now();
    bool ok = true;
    struct Vector {
        const char* message;
        const char* digest;
    };
    const Vector vectors[] = {
        {"", fixtures::kSha256_empty},
        {"abc", fixtures::kSha256_abc},
        {"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq", fixtures::kSha256_two_block},
        {"abcdefghbcdefghicdefghijdefghijkefghijklfghijklmghijklmnhijklmnoijklmnopjklmnopqklmn"
         "opqrlmnopqrsmnopqrstnopqrstu",
         fixtures::kSha256_four_block},
    };
    for (HashImpl impl : {HashImpl::Naive, HashImpl::Optimized}) {
        for (const Vector& v : vectors)
            ok = ok && hex_of(sha256(std::string_view(v.message), impl)) == v.digest;
        ok = ok && hex_of(double_sha256(std::string_view(""), impl)) == fixtures::kSha256d_empty;
    }
    double elapsed = seconds_since(t0);
    ok = ok && elapsed < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "SHA-256 known answers, both implementations (%.3f s, limit 1 s)", elapsed);
    report(1, ok, buf);
}

// ---- 2: cross-implementation equivalence ------------------------------

void criterion_2() {
    auto t0 = clock_type::now();
    std::mt19937_64 rng(0xACCE5517);
    std::uniform_int_distribution<size_t> len_dist(0, 1024);
    size_t mismatches = 0;

    std::vector<uint8_t> data(1024);
    for (int i = 0; i < 100000; ++i) {
        size_t len = len_dist(rng);
        for (size_t j = 0; j < len; ++j) data[j] = static_cast<uint8_t>(rng());
        std::span<const uint8_t> view(data.data(), len);
        if (double_sha256(view, HashImpl::Naive) != double_sha256(view, HashImpl::Optimized))
            ++mismatches;
    }

    for (int i = 0; i < 10000; ++i) {
        uint8_t header[80];
        for (auto& b : header) b = static_cast<uint8_t>(rng());
        std::span<const uint8_t> view(header, 80);
        Digest32 reference = double_sha256_80(view, nullptr, HashImpl::Naive);
        Midstate cached = sha256_midstate(std::span<const uint8_t>(header, 64),
                                          HashImpl::Optimized);
        if (double_sha256_80(view, &cached, HashImpl::Optimized) != reference) ++mismatches;
        if (double_sha256_80(view, nullptr, HashImpl::Optimized) != reference) ++mismatches;
    }

    double elapsed = seconds_since(t0);
    bool ok = mismatches == 0 && elapsed < 30.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "naive and optimized double-SHA-256 agree on 10^5 random inputs and 10^4 "
                  "midstate-cached headers: %zu mismatches (%.1f s, limit 30 s)",
                  mismatches, elapsed);
    report(2, ok, buf);
}

// ---- 3: compact-target decoding ---------------------------------------

void criterion_3() {
    bool ok = true;
    Target256 diff1 = decode_compact_target(0x1d00ffff);
    ok = ok && diff1 == difficulty_1_target();
    ok = ok && target_to_difficulty(diff1) == 1.0;  // exact, no tolerance
    size_t checked = 0;
    for (const auto& v : fixtures::kCompactVectors) {
        if (decode_compact_target(v.nbits) != Target256::from_hex(v.target_hex)) ok = false;
        ++checked;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "compact-target decode: difficulty-1 value exact, %zu frozen vectors match "
                  "the big-integer oracle",
                  checked);
    report(3, ok && checked >= 100, buf);
}

// ---- 4: expected-time formula -----------------------------------------

void criterion_4() {
    double seconds = estimate_expected_seconds(13912524048946.0, 100e12);
    double years = seconds / (365.0 * 86400.0);
    bool ok = std::fabs(years - 18.95) <= 0.01;
    ok = ok && format_duration(seconds) == "18.95 years";
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "expected-time formula: difficulty 13912524048946 at 100 TH/s = %.4f years "
                  "(want 18.95 +/- 0.01)",
                  years);
    report(4, ok, buf);
}

// ---- 5: end-to-end mining loop ----------------------------------------

void criterion_5() {
    auto t0 = clock_type::now();
    PoolConfig config;
    config.share_difficulty = 1.52587890625e-05;
    MockPool pool(config);
    pool.start();

    MineOptions options;
    options.client.host = "127.0.0.1";
    options.client.port = pool.port();
    options.workers = 2;
    options.max_accepted = 5;
    options.max_duration_s = 55.0;
    MineSummary summary = run_miner(options);
    auto records = pool.submissions();
    pool.stop();

    size_t accepted = 0, low_difficulty = 0, other = 0;
    for (const auto& r : records) {
        if (r.verdict == Verdict::Accepted) ++accepted;
        else if (r.verdict == Verdict::LowDifficulty) ++low_difficulty;
        else ++other;
    }
    double elapsed = seconds_since(t0);
    bool ok = summary.accepted >= 5 && accepted >= 5 && low_difficulty == 0 && other == 0 &&
              elapsed < 60.0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "end-to-end loop: %llu shares mined, %zu accepted by the server's independent "
                  "reconstruction, %zu low-difficulty, %zu other rejections (%.1f s, limit 60 s)",
                  static_cast<unsigned long long>(summary.accepted), accepted, low_difficulty,
                  other, elapsed);
    report(5, ok, buf);
}

// ---- 6: clean-jobs semantics ------------------------------------------

void criterion_6() {
    bool queue_ok = false;
    {
        // part 1: the session queue collapses to exactly the post-clean job
        MockPool pool;
        pool.start();
        ClientOptions o;
        o.host = "127.0.0.1";
        o.port = pool.port();
        StratumClient client(o);
        client.connect_and_handshake();
        auto wait_for = [&](auto&& pred) {
            auto deadline = clock_type::now() + std::chrono::seconds(5);
            while (!pred() && clock_type::now() < deadline) client.poll(50);
            return pred();
        };
        wait_for([&] { return client.state().job_queue.size() == 1; });
        pool.issue_job(false);
        pool.issue_job(false);
        pool.issue_job(false);
        wait_for([&] { return client.state().job_queue.size() == 4; });
        std::string clean_id = pool.issue_job(true);
        queue_ok = wait_for([&] {
            return client.state().job_queue.size() == 1 &&
                   client.state().job_queue.back().job_id == clean_id;
        });
        pool.stop();
    }

    // part 2: nothing is ever submitted for a job superseded by a clean flag
    PoolConfig config;
    config.share_difficulty = 1e9;  // pre-clean jobs are unminable in this time frame
    MockPool pool(config);
    pool.start();
    std::string live_id;
    std::thread script([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        pool.issue_job(false);
        pool.issue_job(false);
        pool.issue_job(false);
        std::this_thread::sleep_for(std::chrono::milliseconds(400));
        pool.set_share_difficulty(1.52587890625e-05);
        live_id = pool.issue_job(true);
    });
    MineOptions options;
    options.client.host = "127.0.0.1";
    options.client.port = pool.port();
    options.workers = 2;
    options.max_accepted = 3;
    options.max_duration_s = 30.0;
    MineSummary summary = run_miner(options);
    script.join();
    auto records = pool.submissions();
    pool.stop();

    size_t stale_submissions = 0;
    for (const auto& r : records)
        if (r.job_id != live_id) ++stale_submissions;
    bool ok = queue_ok && summary.accepted >= 1 && stale_submissions == 0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "clean-jobs semantics: queue collapses to 1 after 3 jobs + clean notify "
                  "(%s), %zu submissions for superseded job ids (want 0)",
                  queue_ok ? "yes" : "no", stale_submissions);
    report(6, ok, buf);
}

// ---- 7: protocol message fidelity -------------------------------------

std::vector<std::string> key_order(const Json& obj) {
    std::vector<std::string> keys;
    for (const auto& item : obj.items()) keys.push_back(item.key());
    return keys;
}

void criterion_7() {
    bool ok = true;
    auto expect = [&](bool cond) { ok = ok && cond; };

    // shape 1: subscribe request
    std::string subscribe = encode_subscribe(1, "miner/0.1", std::nullopt, "pool.example", 3333);
    expect(key_order(Json::parse(subscribe)) ==
           std::vector<std::string>{"id", "method", "params"});
    expect(Json::parse(subscribe)["method"] == "mining.subscribe");
    {
        Message m = decode_line(subscribe);
        auto& n = std::get<Notification>(m);
        expect(encode_subscribe(*n.id, n.params[0].get<std::string>(),
                                n.params[1].get<std::string>(), n.params[2].get<std::string>(),
                                n.params[3].get<int>()) == subscribe);
    }

    // shape 2: authorize request + bare-result response
    std::string authorize = encode_authorize(2, "worker1", "x");
    expect(key_order(Json::parse(authorize)) ==
           std::vector<std::string>{"id", "method", "params"});
    {
        Message m = decode_line(authorize);
        auto& n = std::get<Notification>(m);
        expect(encode_authorize(*n.id, n.params[0].get<std::string>(),
                                n.params[1].get<std::string>()) == authorize);
    }
    std::string auth_ok = encode_result_response(2, true);
    expect(key_order(Json::parse(auth_ok)) == std::vector<std::string>{"error", "id", "result"});
    expect(encode_message(decode_line(auth_ok)) == auth_ok);

    // shape 3: submit request, params-first key order
    std::string submit = encode_submit(3, "worker1", "job77", "00000001", "61aa3f2b", "0002f128");
    expect(key_order(Json::parse(submit)) == std::vector<std::string>{"params", "id", "method"});
    expect(Json::parse(submit)["method"] == "mining.submit");
    {
        Message m = decode_line(submit);
        auto& n = std::get<Notification>(m);
        expect(encode_submit(*n.id, n.params[0].get<std::string>(),
                             n.params[1].get<std::string>(), n.params[2].get<std::string>(),
                             n.params[3].get<std::string>(),
                             n.params[4].get<std::string>()) == submit);
    }

    // shape 4: job notification
    JobNotification job;
    job.job_id = "job77";
    job.prevhash = fixtures::kGoldenJob.prevhash;
    job.coinbase1 = fixtures::kGoldenJob.coinbase1;
    job.coinbase2 = fixtures::kGoldenJob.coinbase2;
    for (const char* b : fixtures::kGoldenJob.branches) job.merkle_branches.emplace_back(b);
    job.version = fixtures::kGoldenJob.version;
    job.nbits = fixtures::kGoldenJob.nbits;
    job.ntime = fixtures::kGoldenJob.ntime;
    job.clean_jobs = false;
    std::string notify = encode_notify(job);
    Json notify_json = Json::parse(notify);
    expect(key_order(notify_json) == std::vector<std::string>{"id", "method", "params"});
    expect(notify_json["id"].is_null());
    expect(notify_json["method"] == "mining.notify");
    expect(notify_json["params"].size() == 9);
    expect(notify_json["params"][8] == false);
    expect(encode_message(decode_line(notify)) == notify);

    // shape 5: set_difficulty notification
    std::string set_diff = encode_set_difficulty(2.0);
    expect(set_diff == "{\"id\":null,\"method\":\"mining.set_difficulty\",\"params\":[2]}\n");
    expect(encode_message(decode_line(set_diff)) == set_diff);

    // the three-element error shape, decoded from a spaced wire form too
    std::string error_line = encode_error_response(3, {21, "Job not found", nullptr});
    expect(error_line == "{\"id\":3,\"result\":null,\"error\":[21,\"Job not found\",null]}\n");
    expect(encode_message(decode_line(error_line)) == error_line);
    Message spaced =
        decode_line("{\"id\": 3, \"result\": null, \"error\": [21, \"Job not found\", null]}");
    auto& spaced_resp = std::get<Response>(spaced);
    expect(spaced_resp.error.has_value() && spaced_resp.error->code == 21 &&
           spaced_resp.error->message == "Job not found" && spaced_resp.error->traceback.is_null());
    expect(encode_message(spaced) == error_line);

    report(7, ok,
           "wire fidelity: all five message shapes and the three-element error survive "
           "decode/re-encode byte-exactly with documented key orders");
}

// ---- 8: benchmark harness ---------------------------------------------

struct IndependentCell {
    double sum = 0;
    int count = 0;
};

void criterion_8() {
    BenchOptions options;
    options.trials = 4;
    options.min_exponent = 1;
    options.max_exponent = 20;
    std::string csv = samples_to_csv(run_bench(options));
    BenchReport reported = report_from_csv_text(csv);

    // Recompute every summary number from the CSV text alone, using none of
    // the harness's parsing or aggregation code.
    std::map<uint64_t, std::map<std::string, IndependentCell>> cells;
    {
        size_t pos = csv.find('\n') + 1;  // skip header
        while (pos < csv.size()) {
            size_t end = csv.find('\n', pos);
            if (end == std::string::npos) end = csv.size();
            std::string line = csv.substr(pos, end - pos);
            pos = end + 1;
            if (line.empty()) continue;
            std::vector<std::string> fields;
            size_t start = 0;
            for (;;) {
                size_t comma = line.find(',', start);
                if (comma == std::string::npos) {
                    fields.push_back(line.substr(start));
                    break;
                }
                fields.push_back(line.substr(start, comma - start));
                start = comma + 1;
            }
            if (fields.size() != 6) continue;
            if (fields[5] != "1") continue;  // invalid samples are excluded from averages
            uint64_t iterations = std::strtoull(fields[2].c_str(), nullptr, 10);
            double hashrate = std::strtod(fields[4].c_str(), nullptr);
            IndependentCell& cell = cells[iterations][fields[0]];
            cell.sum += hashrate;
            cell.count += 1;
        }
    }

    bool summary_matches = true;
    std::vector<double> ind_naive_means, ind_opt_means, ind_speedups;
    size_t row_index = 0;
    for (const auto& [iterations, by_impl] : cells) {
        auto naive_it = by_impl.find("naive");
        auto opt_it = by_impl.find("optimized");
        bool has_naive = naive_it != by_impl.end() && naive_it->second.count > 0;
        bool has_opt = opt_it != by_impl.end() && opt_it->second.count > 0;
        if (!has_naive && !has_opt) continue;  // dead row: dropped from the table
        if (row_index >= reported.rows.size()) {
            summary_matches = false;
            break;
        }
        const BenchRow& row = reported.rows[row_index++];
        if (row.iterations != iterations) summary_matches = false;
        if (has_naive) {
            double mean = naive_it->second.sum / naive_it->second.count;
            ind_naive_means.push_back(mean);
            if (!row.naive_mean || *row.naive_mean != mean) summary_matches = false;
        } else if (row.naive_mean) {
            summary_matches = false;
        }
        if (has_opt) {
            double mean = opt_it->second.sum / opt_it->second.count;
            ind_opt_means.push_back(mean);
            if (!row.optimized_mean || *row.optimized_mean != mean) summary_matches = false;
        } else if (row.optimized_mean) {
            summary_matches = false;
        }
        if (has_naive && has_opt) {
            double ratio = (opt_it->second.sum / opt_it->second.count) /
                           (naive_it->second.sum / naive_it->second.count);
            ind_speedups.push_back(ratio);
            if (!row.speedup || *row.speedup != ratio) summary_matches = false;
        }
    }
    summary_matches = summary_matches && row_index == reported.rows.size();
    auto check_stats = [&](const std::optional<Stats>& st, const std::vector<double>& values) {
        if (values.empty()) return !st.has_value();
        if (!st) return false;
        double sum = 0, best = values.front(), worst = values.front();
        for (double v : values) {
            sum += v;
            best = std::max(best, v);
            worst = std::min(worst, v);
        }
        return st->avg == sum / double(values.size()) && st->best == best && st->worst == worst;
    };
    summary_matches = summary_matches && check_stats(reported.naive, ind_naive_means);
    summary_matches = summary_matches && check_stats(reported.optimized, ind_opt_means);
    summary_matches = summary_matches && check_stats(reported.speedup, ind_speedups);

    // the optimized path must win at every large iteration count where both
    // implementations produced usable timings
    size_t comparable = 0, optimized_wins = 0;
    for (const BenchRow& row : reported.rows) {
        if (row.iterations < 1024 || !row.naive_mean || !row.optimized_mean) continue;
        ++comparable;
        if (*row.optimized_mean >= *row.naive_mean) ++optimized_wins;
    }
    bool speedup_ok = comparable >= 5 && optimized_wins == comparable;

    // hashrate stabilizes at large iteration counts
    auto cov_top5 = [&](auto member) {
        std::vector<double> values;
        for (auto it = reported.rows.rbegin(); it != reported.rows.rend() && values.size() < 5;
             ++it)
            if ((*it).*member) values.push_back(*((*it).*member));
        if (values.size() < 5) return 1e9;
        double mean = 0;
        for (double v : values) mean += v;
        mean /= double(values.size());
        double var = 0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= double(values.size());
        return std::sqrt(var) / mean;
    };
    double cov_naive = cov_top5(&BenchRow::naive_mean);
    double cov_opt = cov_top5(&BenchRow::optimized_mean);
    bool cov_ok = cov_naive <= 0.10 && cov_opt <= 0.10;

    bool ok = summary_matches && speedup_ok && cov_ok;
    char buf[280];
    std::snprintf(buf, sizeof buf,
                  "benchmark 2..2^20 x4 trials: summary recomputed from CSV %s; optimized >= "
                  "naive at %zu/%zu large counts; top-5 hashrate CoV naive %.1f%% / optimized "
                  "%.1f%% (limit 10%%)",
                  summary_matches ? "matches exactly" : "DIFFERS", optimized_wins, comparable,
                  cov_naive * 100, cov_opt * 100);
    report(8, ok, buf);
}

// ---- 9: nonce-search vs linear reference scan -------------------------

void criterion_9() {
    const auto& g = fixtures::kGoldenJob;
    HeaderPrefix prefix{};
    auto bytes = hex_to_bytes(g.header_prefix_hex);
    std::copy(bytes.begin(), bytes.end(), prefix.begin());
    Target256 target = Target256::from_hex(g.share_target_hex);

    // plain linear scan, reference hasher only
    uint64_t brute_nonce = uint64_t(1) << 33;  // sentinel: not found
    uint8_t header[80];
    std::memcpy(header, prefix.data(), 76);
    for (uint32_t nonce = 0; nonce < (uint32_t{1} << 20); ++nonce) {
        header[76] = static_cast<uint8_t>(nonce);
        header[77] = static_cast<uint8_t>(nonce >> 8);
        header[78] = static_cast<uint8_t>(nonce >> 16);
        header[79] = static_cast<uint8_t>(nonce >> 24);
        Digest32 h = double_sha256(std::span<const uint8_t>(header, 80), HashImpl::Naive);
        if (hash_meets_target(h, target)) {
            brute_nonce = nonce;
            break;
        }
    }

    SearchOutcome fast = search_nonce(prefix, target, 0, uint64_t{1} << 20, HashImpl::Optimized);
    bool ok = fast.found.has_value() && brute_nonce == fast.found->first &&
              brute_nonce == g.winning_nonce;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "nonce search vs linear reference scan on the frozen job: brute force found "
                  "%llu, engine found %llu, fixture says %u",
                  static_cast<unsigned long long>(brute_nonce),
                  static_cast<unsigned long long>(fast.found ? fast.found->first : 0),
                  g.winning_nonce);
    report(9, ok, buf);
}

}  // namespace

int main() {
    Logger::instance().set_level(LogLevel::Error);
    std::printf("acceptance checks\n=================\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("=================\n%d of 9 checks failed\n", g_failures);
    return g_failures;
}
