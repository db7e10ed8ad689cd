// Pool-side session: handshake, job/difficulty intake, share submission,
// and response matching over one TCP connection.
#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "picomine/log.hpp"
#include "picomine/net.hpp"
#include "picomine/stratum.hpp"
#include "picomine/work.hpp"

namespace picomine {

// Authorization was answered with result != true.
struct AuthRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Phase { Disconnected, Subscribed, Authorized };

struct SessionState {
    Phase phase = Phase::Disconnected;
    std::string extranonce1;
    int extranonce2_size = 0;
    double current_difficulty = 1.0;  // pool default until the first set_difficulty
    std::deque<JobNotification> job_queue;  // newest at the back
    std::set<std::string> seen_job_ids;     // every id ever queued this connection
    uint64_t clean_generation = 0;          // bumped on every clean_jobs notify
};

struct IngestEvent {
    enum class Kind { NewJob, DifficultyChanged, Ignored };
    Kind kind = Kind::Ignored;
    bool clean = false;
};

struct SubmitResult {
    bool accepted = false;
    std::optional<StratumError> error;
};

struct ClientOptions {
    std::string host = "127.0.0.1";
    uint16_t port = 3333;
    std::string username = "worker";
    std::string password = "x";
    std::string user_agent = "picomine/1.0";
    int connect_timeout_ms = 10000;
    int response_timeout_ms = 10000;
};

class StratumClient {
public:
    explicit StratumClient(ClientOptions options) : options_(std::move(options)) {}

    // subscribe + authorize; leaves the session in phase Authorized.
    // Notifications interleaved with the handshake responses are buffered and
    // replayed into the session once authorization completes.
    void connect_and_handshake() {
        state_ = SessionState{};
        stream_ = TcpStream::connect(options_.host, options_.port, options_.connect_timeout_ms);
        reader_.emplace(stream_);

        RequestId sub_id = next_id_++;
        stream_.send_all(encode_subscribe(sub_id, options_.user_agent, std::nullopt, options_.host,
                                          options_.port));
        Response sub_resp = await_response(sub_id);
        if (sub_resp.error)
            throw ProtocolError("subscribe rejected: " + sub_resp.error->message);
        SubscribeResult sub = parse_subscribe_result(sub_resp.result);
        state_.extranonce1 = sub.extranonce1;
        state_.extranonce2_size = sub.extranonce2_size;
        state_.phase = Phase::Subscribed;

        RequestId auth_id = next_id_++;
        stream_.send_all(encode_authorize(auth_id, options_.username, options_.password));
        Response auth_resp = await_response(auth_id);
        if (auth_resp.error || auth_resp.result != Json(true)) {
            state_.phase = Phase::Disconnected;
            std::string why = auth_resp.error ? auth_resp.error->message : "result not true";
            throw AuthRejected("authorization rejected for '" + options_.username + "': " + why);
        }
        state_.phase = Phase::Authorized;

        auto buffered = std::move(pending_notifications_);
        pending_notifications_.clear();
        for (const Notification& n : buffered) ingest_notification(n);
    }

    // Wait up to timeout_ms for one inbound message and apply it.
    // nullopt on timeout; NetError if the connection dropped.
    std::optional<IngestEvent> poll(int timeout_ms) {
        std::optional<std::string> line;
        try {
            line = reader_->read_line(timeout_ms);
        } catch (const TimeoutError&) {
            return std::nullopt;
        }
        if (!line) {
            state_.phase = Phase::Disconnected;
            throw NetError("connection closed by pool");
        }
        return apply_line(*line);
    }

    // Send mining.submit and wait for the verdict. Notifications that arrive
    // while waiting are ingested on the spot.
    SubmitResult submit_share(const Share& share) {
        if (state_.phase != Phase::Authorized)
            throw std::logic_error("submit_share requires an authorized session");
        RequestId id = next_id_++;
        stream_.send_all(encode_submit(id, options_.username, share.job_id, share.extranonce2,
                                       share.ntime, u32_to_hex(share.nonce)));
        Response resp = await_response(id);
        if (resp.error) return SubmitResult{false, resp.error};
        return SubmitResult{resp.result == Json(true), std::nullopt};
    }

    void disconnect() {
        stream_.close();
        reader_.reset();
        state_.phase = Phase::Disconnected;
    }

    SessionState& state() { return state_; }
    const SessionState& state() const { return state_; }
    const ClientOptions& options() const { return options_; }
    bool connected() const { return stream_.is_open(); }

private:
    Response await_response(RequestId id) {
        using clock = std::chrono::steady_clock;
        auto deadline = clock::now() + std::chrono::milliseconds(options_.response_timeout_ms);
        for (;;) {
            int remaining = static_cast<int>(
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now())
                    .count());
            if (remaining <= 0) throw TimeoutError("no response to request " + std::to_string(id));
            std::optional<std::string> line = reader_->read_line(remaining);
            if (!line) {
                state_.phase = Phase::Disconnected;
                throw NetError("connection closed while awaiting response");
            }
            Message msg = decode_line(*line);
            if (auto* resp = std::get_if<Response>(&msg)) {
                if (resp->id == id) return std::move(*resp);
                log_warn("unmatched_response", {{"id", std::to_string(resp->id)}});
                continue;  // dropped
            }
            const auto& note = std::get<Notification>(msg);
            if (state_.phase == Phase::Authorized)
                ingest_notification(note);
            else
                pending_notifications_.push_back(note);
        }
    }

    IngestEvent apply_line(const std::string& line) {
        Message msg = decode_line(line);
        if (auto* resp = std::get_if<Response>(&msg)) {
            log_warn("unmatched_response", {{"id", std::to_string(resp->id)}});
            return IngestEvent{};
        }
        return ingest_notification(std::get<Notification>(msg));
    }

    IngestEvent ingest_notification(const Notification& note) {
        if (note.method == "mining.notify") {
            JobNotification job = parse_notify(note.params);
            IngestEvent ev{IngestEvent::Kind::NewJob, job.clean_jobs};
            if (job.clean_jobs) {
                state_.job_queue.clear();
                ++state_.clean_generation;
            }
            state_.seen_job_ids.insert(job.job_id);
            state_.job_queue.push_back(std::move(job));
            log_info("job_received", {{"job", state_.job_queue.back().job_id},
                                      {"clean", ev.clean ? "true" : "false"}});
            return ev;
        }
        if (note.method == "mining.set_difficulty") {
            state_.current_difficulty = parse_set_difficulty(note.params);
            log_info("difficulty_set",
                     {{"difficulty", std::to_string(state_.current_difficulty)}});
            return IngestEvent{IngestEvent::Kind::DifficultyChanged, false};
        }
        log_info("notification_ignored", {{"method", note.method}});
        return IngestEvent{};
    }

    ClientOptions options_;
    TcpStream stream_;
    std::optional<LineReader> reader_;
    SessionState state_;
    RequestId next_id_ = 1;
    std::vector<Notification> pending_notifications_;
};

// Exponential reconnect delay: 1 s doubling to a 60 s cap.
class ReconnectBackoff {
public:
    double next_delay_s() {
        double d = delay_s_;
        delay_s_ = std::min(delay_s_ * 2.0, 60.0);
        return d;
    }
    void reset() { delay_s_ = 1.0; }

private:
    double delay_s_ = 1.0;
};

}  // namespace picomine
