// In-process Stratum pool server for closed-loop testing. It answers the
// handshake, issues jobs, and re-validates every submitted share from its own
// record of the job using only the reference hasher and its own serialization
// code — deliberately not the client-side work assembly in work.hpp — so an
// acceptance here is an independent check of the whole client stack.
#pragma once

#include <atomic>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "picomine/log.hpp"
#include "picomine/net.hpp"
#include "picomine/sha256.hpp"
#include "picomine/stratum.hpp"
#include "picomine/target.hpp"

namespace picomine {

struct JobTemplate {
    std::string prevhash;
    std::string coinbase1;
    std::string coinbase2;
    std::vector<std::string> merkle_branches;
    std::string version;
    std::string nbits;
    std::string ntime;
};

// A small, well-formed job usable out of the box (same data as the test fixtures).
inline JobTemplate default_job_template() {
    JobTemplate t;
    t.prevhash = "4d16b6f85af6e2198f44ae2a6de67f78487ae5611b77c6c0440b921e00000000";
    t.coinbase1 =
        "01000000010000000000000000000000000000000000000000000000000000000000000000ffffffff2002"
        "0862062f503253482f04b8864e5008";
    t.coinbase2 =
        "072f736c7573682f000000000100f2052a010000001976a914d23fcdf86f7e756a64a7a9688ef990332704"
        "8ed988ac00000000";
    t.merkle_branches = {
        "59bb1fe0d2b2202f6780bfe19f9d845f8709c745f358f826b2ab02a510da070e",
        "064e57314e3f26e664ffcbc1526ac0622c044a3dd3228c964340490da8e75b8a",
        "b1b9158d0d5d266bdd6f53758fce2fbf782e1ec63e62b6da85bd0ff675628ff3",
    };
    t.version = "00000002";
    t.nbits = "1c2ac4af";
    t.ntime = "504e86b9";
    return t;
}

struct PoolConfig {
    uint16_t port = 0;  // 0 = pick an ephemeral port; read back via MockPool::port()
    int extranonce2_size = 4;
    double share_difficulty = 1.0;
    JobTemplate job = default_job_template();
    bool check_credentials = false;
    std::string username = "worker";
    std::string password = "x";
    double notify_interval_s = 0.0;  // > 0: rebroadcast the template job periodically
    int clean_every = 0;             // every Nth periodic job carries clean_jobs; 0 = never
};

enum class Verdict { Accepted, JobNotFound, LowDifficulty, Duplicate, Unauthorized, Malformed };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Accepted: return "accepted";
        case Verdict::JobNotFound: return "job_not_found";
        case Verdict::LowDifficulty: return "low_difficulty";
        case Verdict::Duplicate: return "duplicate";
        case Verdict::Unauthorized: return "unauthorized";
        case Verdict::Malformed: return "malformed";
    }
    return "?";
}

struct SubmissionRecord {
    std::string worker;
    std::string job_id;
    std::string extranonce2;
    std::string ntime;
    uint32_t nonce = 0;
    Verdict verdict = Verdict::Malformed;
    bool block_solve = false;  // hash also clears the nbits-encoded network target
};

class MockPool {
public:
    explicit MockPool(PoolConfig config = {}) : config_(std::move(config)) {
        if (config_.extranonce2_size < 1 || config_.extranonce2_size > 16)
            throw std::invalid_argument("extranonce2_size out of range [1,16]");
        if (!(config_.share_difficulty > 0))
            throw std::invalid_argument("share difficulty must be positive");
    }

    ~MockPool() { stop(); }
    MockPool(const MockPool&) = delete;
    MockPool& operator=(const MockPool&) = delete;

    void start() {
        listener_ = TcpListener::bind_and_listen(config_.port);
        stopping_ = false;
        acceptor_ = std::thread([this] { acceptor_loop(); });
        if (config_.notify_interval_s > 0)
            broadcaster_ = std::thread([this] { broadcaster_loop(); });
        log_info("pool_started", {{"port", std::to_string(listener_.port())}});
    }

    void stop() {
        if (stopping_.exchange(true)) {
            if (acceptor_.joinable()) acceptor_.join();
            if (broadcaster_.joinable()) broadcaster_.join();
            return;
        }
        listener_.close();
        if (acceptor_.joinable()) acceptor_.join();
        if (broadcaster_.joinable()) broadcaster_.join();
        std::vector<std::shared_ptr<Connection>> conns;
        {
            std::lock_guard lock(connections_mutex_);
            conns.swap(connections_);
        }
        for (auto& c : conns) {
            c->stream.shutdown_both();
            if (c->thread.joinable()) c->thread.join();
        }
    }

    uint16_t port() const { return listener_.port(); }

    // Broadcast a fresh job built from the given template. Returns its id.
    std::string issue_job(const JobTemplate& tmpl, bool clean) {
        std::string line;
        std::string id;
        {
            std::lock_guard lock(jobs_mutex_);
            id = "job-" + std::to_string(++job_counter_);
            ActiveJob job;
            job.tmpl = tmpl;
            job.share_target = difficulty_to_target(config_.share_difficulty);
            job.network_target = decode_compact_target(parse_u32_hex(tmpl.nbits));
            jobs_.emplace(id, job);
            latest_job_id_ = id;
            line = notify_line(id, tmpl, clean);
        }
        broadcast(line);
        log_info("job_issued", {{"job", id}, {"clean", clean ? "true" : "false"}});
        return id;
    }

    std::string issue_job(bool clean) { return issue_job(config_.job, clean); }

    // Change the share difficulty for jobs issued from now on and tell clients.
    void set_share_difficulty(double difficulty) {
        if (!(difficulty > 0)) throw std::invalid_argument("difficulty must be positive");
        {
            std::lock_guard lock(jobs_mutex_);
            config_.share_difficulty = difficulty;
        }
        broadcast(encode_set_difficulty(difficulty));
    }

    std::vector<SubmissionRecord> submissions() const {
        std::lock_guard lock(submissions_mutex_);
        return submissions_;
    }

    size_t connection_count() const {
        std::lock_guard lock(connections_mutex_);
        size_t n = 0;
        for (const auto& c : connections_)
            if (!c->done) ++n;
        return n;
    }

private:
    struct ActiveJob {
        JobTemplate tmpl;
        Target256 share_target;    // frozen when the job is issued
        Target256 network_target;  // decoded from the template's nbits
    };

    struct Connection {
        explicit Connection(TcpStream s) : stream(std::move(s)) {}
        TcpStream stream;
        std::mutex write_mutex;  // responses and broadcasts interleave
        std::string extranonce1;
        bool subscribed = false;
        bool authorized = false;
        std::string worker;
        std::thread thread;
        std::atomic<bool> done{false};
    };

    // ---- threads ------------------------------------------------------

    void acceptor_loop() {
        while (!stopping_) {
            std::optional<TcpStream> accepted;
            try {
                accepted = listener_.accept(200);
            } catch (const NetError&) {
                break;
            }
            if (!accepted) continue;
            auto conn = std::make_shared<Connection>(std::move(*accepted));
            {
                std::lock_guard lock(connections_mutex_);
                // reap finished sessions
                for (auto it = connections_.begin(); it != connections_.end();) {
                    if ((*it)->done && (*it)->thread.joinable()) {
                        (*it)->thread.join();
                        it = connections_.erase(it);
                    } else {
                        ++it;
                    }
                }
                connections_.push_back(conn);
            }
            conn->thread = std::thread([this, conn] { session_loop(*conn); });
        }
    }

    void broadcaster_loop() {
        using namespace std::chrono;
        auto interval = duration<double>(config_.notify_interval_s);
        auto next = steady_clock::now() + duration_cast<steady_clock::duration>(interval);
        int issued = 0;
        while (!stopping_) {
            std::this_thread::sleep_for(milliseconds(50));
            if (steady_clock::now() < next) continue;
            next += duration_cast<steady_clock::duration>(interval);
            ++issued;
            bool clean = config_.clean_every > 0 && issued % config_.clean_every == 0;
            issue_job(config_.job, clean);
        }
    }

    void session_loop(Connection& conn) {
        LineReader reader(conn.stream);
        while (!stopping_) {
            std::optional<std::string> line;
            try {
                line = reader.read_line(200);
            } catch (const TimeoutError&) {
                continue;
            } catch (const FramingError& e) {
                log_warn("client_framing_error", {{"what", e.what()}});
                break;
            } catch (const NetError&) {
                break;
            }
            if (!line) break;  // peer closed
            if (line->empty() || *line == "\r") continue;
            try {
                handle_line(conn, *line);
            } catch (const NetError&) {
                break;
            }
        }
        conn.stream.close();
        conn.done = true;
    }

    // ---- protocol handling -------------------------------------------

    void send_line(Connection& conn, const std::string& line) {
        std::lock_guard lock(conn.write_mutex);
        conn.stream.send_all(line);
    }

    void broadcast(const std::string& line) {
        std::vector<std::shared_ptr<Connection>> conns;
        {
            std::lock_guard lock(connections_mutex_);
            conns = connections_;
        }
        for (auto& c : conns) {
            if (c->done || !c->subscribed) continue;
            try {
                send_line(*c, line);
            } catch (const NetError&) {
                // session thread will notice and clean up
            }
        }
    }

    void handle_line(Connection& conn, const std::string& line) {
        Message msg;
        try {
            msg = decode_line(line);
        } catch (const FramingError& e) {
            log_warn("client_bad_json", {{"what", e.what()}});
            return;
        } catch (const ProtocolError& e) {
            log_warn("client_bad_shape", {{"what", e.what()}});
            return;
        }
        if (std::holds_alternative<Response>(msg)) {
            log_warn("client_sent_response", {});
            return;
        }
        const auto& req = std::get<Notification>(msg);
        if (!req.id.has_value()) {
            log_warn("client_notification_ignored", {{"method", req.method}});
            return;
        }
        RequestId id = *req.id;
        if (req.method == "mining.subscribe") {
            handle_subscribe(conn, id);
        } else if (req.method == "mining.authorize") {
            handle_authorize(conn, id, req.params);
        } else if (req.method == "mining.submit") {
            handle_submit(conn, id, req.params);
        } else {
            send_line(conn, encode_error_response(id, {20, "Unknown method", nullptr}));
        }
    }

    void handle_subscribe(Connection& conn, RequestId id) {
        uint32_t serial;
        {
            std::lock_guard lock(jobs_mutex_);
            serial = ++extranonce1_counter_;
        }
        char hex[9];
        std::snprintf(hex, sizeof hex, "%08x", serial);
        conn.extranonce1 = hex;
        SubscribeResult result;
        result.set_difficulty_subscription = "diff-" + std::to_string(serial);
        result.notify_subscription = "notify-" + std::to_string(serial);
        result.extranonce1 = conn.extranonce1;
        result.extranonce2_size = config_.extranonce2_size;
        send_line(conn, encode_subscribe_response(id, result));
        conn.subscribed = true;
    }

    void handle_authorize(Connection& conn, RequestId id, const Json& params) {
        std::string user, pass;
        if (params.size() >= 1 && params[0].is_string()) user = params[0].get<std::string>();
        if (params.size() >= 2 && params[1].is_string()) pass = params[1].get<std::string>();
        bool ok = !config_.check_credentials ||
                  (user == config_.username && pass == config_.password);
        send_line(conn, encode_result_response(id, ok));
        if (!ok) {
            log_info("authorize_rejected", {{"user", user}});
            return;
        }
        conn.authorized = true;
        conn.worker = user;
        // the client starts getting work immediately after authorization
        std::string notify;
        double difficulty;
        {
            std::lock_guard lock(jobs_mutex_);
            difficulty = config_.share_difficulty;
            if (latest_job_id_.empty()) {
                std::string jid = "job-" + std::to_string(++job_counter_);
                ActiveJob job;
                job.tmpl = config_.job;
                job.share_target = difficulty_to_target(difficulty);
                job.network_target = decode_compact_target(parse_u32_hex(config_.job.nbits));
                jobs_.emplace(jid, job);
                latest_job_id_ = jid;
            }
            notify = notify_line(latest_job_id_, jobs_.at(latest_job_id_).tmpl, true);
        }
        send_line(conn, encode_set_difficulty(difficulty));
        send_line(conn, notify);
    }

    void handle_submit(Connection& conn, RequestId id, const Json& params) {
        SubmissionRecord rec;
        rec.worker = conn.worker;
        Verdict verdict;
        bool solve = false;
        if (!conn.authorized) {
            verdict = Verdict::Unauthorized;
        } else if (params.size() != 5 || !params[0].is_string() || !params[1].is_string() ||
                   !params[2].is_string() || !params[3].is_string() || !params[4].is_string()) {
            verdict = Verdict::Malformed;
        } else {
            rec.job_id = params[1].get<std::string>();
            rec.extranonce2 = to_lower_ascii(params[2].get<std::string>());
            rec.ntime = to_lower_ascii(params[3].get<std::string>());
            std::string nonce_hex = to_lower_ascii(params[4].get<std::string>());
            if (!is_plain_hex(rec.extranonce2) ||
                rec.extranonce2.size() != size_t(2 * config_.extranonce2_size) ||
                !is_plain_hex(rec.ntime) || rec.ntime.size() != 8 || !is_plain_hex(nonce_hex) ||
                nonce_hex.size() != 8) {
                verdict = Verdict::Malformed;
            } else {
                rec.nonce = parse_u32_hex(nonce_hex);
                verdict = validate_share(conn, rec, solve);
            }
        }
        rec.verdict = verdict;
        rec.block_solve = solve;
        {
            std::lock_guard lock(submissions_mutex_);
            submissions_.push_back(rec);
        }
        log_info("share_judged", {{"job", rec.job_id},
                                  {"nonce", std::to_string(rec.nonce)},
                                  {"verdict", verdict_name(verdict)}});
        switch (verdict) {
            case Verdict::Accepted:
                send_line(conn, encode_result_response(id, true));
                break;
            case Verdict::JobNotFound:
                send_line(conn, encode_error_response(id, {21, "Job not found", nullptr}));
                break;
            case Verdict::Duplicate:
                send_line(conn, encode_error_response(id, {22, "Duplicate share", nullptr}));
                break;
            case Verdict::LowDifficulty:
                send_line(conn, encode_error_response(id, {23, "Low difficulty share", nullptr}));
                break;
            case Verdict::Unauthorized:
                send_line(conn, encode_error_response(id, {24, "Unauthorized worker", nullptr}));
                break;
            case Verdict::Malformed:
                send_line(conn, encode_error_response(id, {20, "Protocol error", nullptr}));
                break;
        }
    }

    // ---- independent share validation --------------------------------
    // Rebuilds coinbase, merkle root, and the full 80-byte header from the
    // server's own job record, hashes with the reference implementation only,
    // and compares against the target frozen at job issue.

    Verdict validate_share(Connection& conn, const SubmissionRecord& rec, bool& solve) {
        ActiveJob job;
        {
            std::lock_guard lock(jobs_mutex_);
            auto it = jobs_.find(rec.job_id);
            if (it == jobs_.end()) return Verdict::JobNotFound;
            job = it->second;
        }
        {
            // accepted (job_id, extranonce2, nonce) triples must stay unique
            std::lock_guard lock(submissions_mutex_);
            auto key = std::tie(rec.job_id, rec.extranonce2, rec.nonce);
            for (const auto& prior : submissions_) {
                if (prior.verdict != Verdict::Accepted) continue;
                if (std::tie(prior.job_id, prior.extranonce2, prior.nonce) == key)
                    return Verdict::Duplicate;
            }
        }

        std::vector<uint8_t> coinbase = parse_hex(job.tmpl.coinbase1);
        append_hex(coinbase, conn.extranonce1);
        append_hex(coinbase, rec.extranonce2);
        append_hex(coinbase, job.tmpl.coinbase2);

        Digest32 root = double_sha256(
            std::span<const uint8_t>(coinbase.data(), coinbase.size()), HashImpl::Naive);
        for (const std::string& branch_hex : job.tmpl.merkle_branches) {
            std::vector<uint8_t> cat(root.begin(), root.end());
            append_hex(cat, branch_hex);
            root = double_sha256(std::span<const uint8_t>(cat.data(), cat.size()),
                                 HashImpl::Naive);
        }

        uint8_t header[80];
        put_le32(header, parse_u32_hex(job.tmpl.version));
        std::vector<uint8_t> prev = parse_hex(job.tmpl.prevhash);
        for (size_t w = 0; w < 32; w += 4)  // undo the wire's per-word reordering
            for (size_t i = 0; i < 4; ++i) header[4 + w + i] = prev[w + 3 - i];
        for (size_t i = 0; i < 32; ++i) header[36 + i] = root[31 - i];
        put_le32(header + 68, parse_u32_hex(rec.ntime));
        put_le32(header + 72, parse_u32_hex(job.tmpl.nbits));
        put_le32(header + 76, rec.nonce);

        Digest32 hash =
            double_sha256(std::span<const uint8_t>(header, 80), HashImpl::Naive);
        if (!hash_below_or_equal(hash, job.share_target)) return Verdict::LowDifficulty;
        solve = hash_below_or_equal(hash, job.network_target);
        return Verdict::Accepted;
    }

    // The server keeps its own byte-twiddling helpers so validation shares no
    // serialization code with the client-side work assembly.

    static bool is_plain_hex(const std::string& s) {
        if (s.empty() || s.size() % 2 != 0) return false;
        for (char c : s)
            if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
        return true;
    }

    static std::string to_lower_ascii(std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    }

    static int nibble(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ProtocolError("bad hex digit");
    }

    static std::vector<uint8_t> parse_hex(const std::string& s) {
        if (s.size() % 2 != 0) throw ProtocolError("odd hex length");
        std::vector<uint8_t> out(s.size() / 2);
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<uint8_t>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
        return out;
    }

    static void append_hex(std::vector<uint8_t>& out, const std::string& s) {
        std::vector<uint8_t> bytes = parse_hex(s);
        out.insert(out.end(), bytes.begin(), bytes.end());
    }

    static uint32_t parse_u32_hex(const std::string& s) {
        if (s.size() != 8) throw ProtocolError("expected 8 hex chars");
        uint32_t v = 0;
        for (char c : s) v = v << 4 | static_cast<uint32_t>(nibble(c));
        return v;
    }

    static void put_le32(uint8_t* out, uint32_t v) {
        out[0] = static_cast<uint8_t>(v);
        out[1] = static_cast<uint8_t>(v >> 8);
        out[2] = static_cast<uint8_t>(v >> 16);
        out[3] = static_cast<uint8_t>(v >> 24);
    }

    // digest bytes are the little-endian form of the 256-bit hash value
    static bool hash_below_or_equal(const Digest32& hash, const Target256& target) {
        std::array<uint8_t, 32> target_be = target.to_be_bytes();
        for (int i = 0; i < 32; ++i) {
            uint8_t h = hash[31 - i];
            if (h < target_be[i]) return true;
            if (h > target_be[i]) return false;
        }
        return true;
    }

    std::string notify_line(const std::string& job_id, const JobTemplate& tmpl, bool clean) {
        JobNotification n;
        n.job_id = job_id;
        n.prevhash = tmpl.prevhash;
        n.coinbase1 = tmpl.coinbase1;
        n.coinbase2 = tmpl.coinbase2;
        n.merkle_branches = tmpl.merkle_branches;
        n.version = tmpl.version;
        n.nbits = tmpl.nbits;
        n.ntime = tmpl.ntime;
        n.clean_jobs = clean;
        return encode_notify(n);
    }

    PoolConfig config_;
    TcpListener listener_;
    std::thread acceptor_;
    std::thread broadcaster_;
    std::atomic<bool> stopping_{false};

    mutable std::mutex connections_mutex_;
    std::vector<std::shared_ptr<Connection>> connections_;

    std::mutex jobs_mutex_;
    std::map<std::string, ActiveJob> jobs_;
    std::string latest_job_id_;
    uint64_t job_counter_ = 0;
    uint32_t extranonce1_counter_ = 0;

    mutable std::mutex submissions_mutex_;
    std::vector<SubmissionRecord> submissions_;
};

// key=value config for the standalone server; '#' starts a comment line.
inline PoolConfig load_pool_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pool config: " + path);
    PoolConfig config;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("pool config line " + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "port") config.port = static_cast<uint16_t>(std::stoul(value));
        else if (key == "extranonce2_size") config.extranonce2_size = std::stoi(value);
        else if (key == "difficulty") config.share_difficulty = std::stod(value);
        else if (key == "check_credentials") config.check_credentials = value == "true" || value == "1";
        else if (key == "username") config.username = value;
        else if (key == "password") config.password = value;
        else if (key == "prevhash") config.job.prevhash = value;
        else if (key == "coinbase1") config.job.coinbase1 = value;
        else if (key == "coinbase2") config.job.coinbase2 = value;
        else if (key == "version") config.job.version = value;
        else if (key == "nbits") config.job.nbits = value;
        else if (key == "ntime") config.job.ntime = value;
        else if (key == "notify_interval_s") config.notify_interval_s = std::stod(value);
        else if (key == "clean_every") config.clean_every = std::stoi(value);
        else if (key == "branches") {
            config.job.merkle_branches.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (!item.empty()) config.job.merkle_branches.push_back(item);
            }
        } else {
            throw std::runtime_error("pool config line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
        }
    }
    return config;
}

}  // namespace picomine
