#pragma once

// Stratum v1 wire codec: line-framed JSON-RPC, strictly positional params.
// Pure string <-> struct transformations; no sockets here.
//
// Conventions implemented (and mirrored by the mock pool so the loop closes):
//   - one JSON object per line, LF-terminated, max 64 KiB per line;
//   - requests carry increasing integer ids; notifications have id null;
//   - errors are 3-element arrays [code, message, traceback-or-null].

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "picomine/hex.hpp"

namespace picomine {

using Json = nlohmann::ordered_json;

inline constexpr size_t kMaxLineBytes = 64 * 1024;

using RequestId = int64_t;

// Line is not a well-formed JSON object (or is oversized / unterminated).
struct FramingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed JSON that violates the protocol shape.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wire error triple: [code, message, traceback].
struct StratumError {
    int code = 0;
    std::string message;
    Json traceback = nullptr;

    friend bool operator==(const StratumError& a, const StratumError& b) {
        return a.code == b.code && a.message == b.message && a.traceback == b.traceback;
    }
};

struct Response {
    RequestId id = 0;
    Json result = nullptr;
    std::optional<StratumError> error;
};

// A message carrying a method. True notifications have no id; method calls
// from the peer (as seen by a server) carry one.
struct Notification {
    std::string method;
    Json params = Json::array();
    std::optional<RequestId> id;
};

using Message = std::variant<Response, Notification>;

struct SubscribeResult {
    std::string set_difficulty_subscription;
    std::string notify_subscription;
    std::string extranonce1;
    int extranonce2_size = 0;
};

// One mining.notify payload: everything needed to build block headers.
struct JobNotification {
    std::string job_id;
    std::string prevhash;     // 64 hex chars
    std::string coinbase1;    // hex
    std::string coinbase2;    // hex
    std::vector<std::string> merkle_branches;  // 64 hex chars each
    std::string version;      // 8 hex chars
    std::string nbits;        // 8 hex chars
    std::string ntime;        // 8 hex chars
    bool clean_jobs = false;
};

namespace detail {

inline std::string finish_line(const Json& j) {
    std::string out = j.dump();
    out.push_back('\n');
    return out;
}

inline void require_hex_width(std::string_view value, size_t width, const char* what) {
    if (value.size() != width || !is_hex(value))
        throw ProtocolError(std::string(what) + ": expected " + std::to_string(width) +
                            " hex chars");
}

}  // namespace detail

// ------------------------------------------------------------- client -> pool

inline std::string encode_subscribe(RequestId id, std::string_view user_agent,
                                    std::optional<std::string_view> session,
                                    std::string_view host, int port) {
    Json j;
    j["id"] = id;
    j["method"] = "mining.subscribe";
    j["params"] = Json::array({user_agent, session.value_or(""), host, port});
    return detail::finish_line(j);
}

inline std::string encode_authorize(RequestId id, std::string_view username,
                                    std::string_view password) {
    Json j;
    j["id"] = id;
    j["method"] = "mining.authorize";
    j["params"] = Json::array({username, password});
    return detail::finish_line(j);
}

inline std::string encode_submit(RequestId id, std::string_view username, std::string_view job_id,
                                 std::string_view extranonce2, std::string_view ntime,
                                 std::string_view nonce) {
    std::string e2 = to_lower_hex(extranonce2);
    std::string nt = to_lower_hex(ntime);
    std::string nn = to_lower_hex(nonce);
    if (e2.empty() || !is_hex(e2)) throw ProtocolError("extranonce2: expected even-length hex");
    detail::require_hex_width(nt, 8, "ntime");
    detail::require_hex_width(nn, 8, "nonce");
    Json j;
    j["params"] = Json::array({username, job_id, e2, nt, nn});
    j["id"] = id;
    j["method"] = "mining.submit";
    return detail::finish_line(j);
}

// ------------------------------------------------------------- pool -> client

inline std::string encode_subscribe_response(RequestId id, const SubscribeResult& r) {
    Json j;
    j["id"] = id;
    j["result"] = Json::array(
        {Json::array({Json::array({"mining.set_difficulty", r.set_difficulty_subscription}),
                      Json::array({"mining.notify", r.notify_subscription})}),
         r.extranonce1, r.extranonce2_size});
    j["error"] = nullptr;
    return detail::finish_line(j);
}

inline std::string encode_result_response(RequestId id, bool result) {
    Json j;
    j["error"] = nullptr;
    j["id"] = id;
    j["result"] = result;
    return detail::finish_line(j);
}

inline std::string encode_error_response(RequestId id, const StratumError& err) {
    Json j;
    j["id"] = id;
    j["result"] = nullptr;
    j["error"] = Json::array({err.code, err.message, err.traceback});
    return detail::finish_line(j);
}

inline std::string encode_set_difficulty(double difficulty) {
    Json j;
    j["id"] = nullptr;
    j["method"] = "mining.set_difficulty";
    // integral difficulties travel as integers, matching common pool output
    if (difficulty == std::trunc(difficulty) && difficulty >= 0 && difficulty < 9.2e18)
        j["params"] = Json::array({static_cast<int64_t>(difficulty)});
    else
        j["params"] = Json::array({difficulty});
    return detail::finish_line(j);
}

inline std::string encode_notify(const JobNotification& job) {
    Json j;
    j["id"] = nullptr;
    j["method"] = "mining.notify";
    j["params"] = Json::array({job.job_id, job.prevhash, job.coinbase1, job.coinbase2,
                               job.merkle_branches, job.version, job.nbits, job.ntime,
                               job.clean_jobs});
    return detail::finish_line(j);
}

// --------------------------------------------------------------------- decode

// Decode one line into a Response or a Notification. Malformed JSON raises
// FramingError; structurally wrong messages raise ProtocolError. Total over
// arbitrary input up to the line cap.
inline Message decode_line(std::string_view line) {
    if (line.size() > kMaxLineBytes) throw FramingError("line exceeds 64 KiB cap");
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
        line.remove_suffix(1);
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FramingError("malformed JSON line");
    if (!j.is_object()) throw ProtocolError("message is not a JSON object");

    if (j.contains("method")) {
        const Json& method = j["method"];
        if (!method.is_string()) throw ProtocolError("method must be a string");
        Notification n;
        n.method = method.get<std::string>();
        if (j.contains("params")) {
            if (!j["params"].is_array()) throw ProtocolError("params must be an array");
            n.params = j["params"];
        }
        if (j.contains("id") && !j["id"].is_null()) {
            if (!j["id"].is_number_integer()) throw ProtocolError("id must be integer or null");
            n.id = j["id"].get<int64_t>();
        }
        return n;
    }

    if (!j.contains("id") || j["id"].is_null())
        throw ProtocolError("response is missing a non-null id");
    if (!j["id"].is_number_integer()) throw ProtocolError("response id must be an integer");
    Response r;
    r.id = j["id"].get<int64_t>();
    if (j.contains("result")) r.result = j["result"];
    if (j.contains("error") && !j["error"].is_null()) {
        const Json& e = j["error"];
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_string())
            throw ProtocolError("error must be a [code, message, traceback] triple");
        r.error = StratumError{e[0].get<int>(), e[1].get<std::string>(), e[2]};
    }
    return r;
}

// Re-encode a decoded message; with ordered_json this reproduces the original
// key order, so decode -> encode round trips byte-for-byte on our own lines.
inline std::string encode_message(const Message& msg) {
    if (const auto* n = std::get_if<Notification>(&msg)) {
        Json j;
        if (n->id.has_value())
            j["id"] = *n->id;
        // true notifications re-emit the conventional id:null first key only
        // when re-encoding a server line; requests keep params-first shape via
        // the dedicated encoders, so here we use the canonical order.
        else
            j["id"] = nullptr;
        j["method"] = n->method;
        j["params"] = n->params;
        return detail::finish_line(j);
    }
    const auto& r = std::get<Response>(msg);
    if (r.error.has_value()) {
        Json j;
        j["id"] = r.id;
        j["result"] = r.result;
        j["error"] = Json::array({r.error->code, r.error->message, r.error->traceback});
        return detail::finish_line(j);
    }
    Json j;
    j["error"] = nullptr;
    j["id"] = r.id;
    j["result"] = r.result;
    return detail::finish_line(j);
}

// ------------------------------------------------------------- param parsing

// mining.notify params: [job_id, prevhash, coinbase1, coinbase2, branches,
// version, nbits, ntime, clean_jobs].
inline JobNotification parse_notify(const Json& params) {
    if (!params.is_array() || params.size() != 9)
        throw ProtocolError("mining.notify expects 9 positional params");
    for (int i : {0, 1, 2, 3, 5, 6, 7})
        if (!params[i].is_string()) throw ProtocolError("mining.notify param is not a string");
    if (!params[4].is_array()) throw ProtocolError("merkle branches must be an array");
    if (!params[8].is_boolean()) throw ProtocolError("clean flag must be a boolean");

    JobNotification job;
    job.job_id = params[0].get<std::string>();
    job.prevhash = to_lower_hex(params[1].get<std::string>());
    job.coinbase1 = to_lower_hex(params[2].get<std::string>());
    job.coinbase2 = to_lower_hex(params[3].get<std::string>());
    for (const Json& b : params[4]) {
        if (!b.is_string()) throw ProtocolError("merkle branch is not a string");
        job.merkle_branches.push_back(to_lower_hex(b.get<std::string>()));
    }
    job.version = to_lower_hex(params[5].get<std::string>());
    job.nbits = to_lower_hex(params[6].get<std::string>());
    job.ntime = to_lower_hex(params[7].get<std::string>());
    job.clean_jobs = params[8].get<bool>();

    detail::require_hex_width(job.prevhash, 64, "prevhash");
    for (const auto& b : job.merkle_branches) detail::require_hex_width(b, 64, "merkle branch");
    detail::require_hex_width(job.version, 8, "version");
    detail::require_hex_width(job.nbits, 8, "nbits");
    detail::require_hex_width(job.ntime, 8, "ntime");
    if (!is_hex(job.coinbase1)) throw ProtocolError("coinbase1 is not valid hex");
    if (!is_hex(job.coinbase2)) throw ProtocolError("coinbase2 is not valid hex");
    return job;
}

inline double parse_set_difficulty(const Json& params) {
    if (!params.is_array() || params.empty() || !params[0].is_number())
        throw ProtocolError("mining.set_difficulty expects one numeric param");
    double d = params[0].get<double>();
    if (!(d > 0)) throw ProtocolError("difficulty must be positive");
    return d;
}

// mining.subscribe result: [[[method, sub_id], [method, sub_id]],
// extranonce1, extranonce2_size].
inline SubscribeResult parse_subscribe_result(const Json& result) {
    if (!result.is_array() || result.size() != 3)
        throw ProtocolError("subscribe result expects 3 entries");
    if (!result[0].is_array() || !result[1].is_string() ||
        !result[2].is_number_integer())
        throw ProtocolError("subscribe result has wrong entry types");
    SubscribeResult r;
    for (const Json& sub : result[0]) {
        if (!sub.is_array() || sub.size() != 2 || !sub[0].is_string() || !sub[1].is_string())
            throw ProtocolError("subscription entry must be [method, id]");
        std::string method = sub[0].get<std::string>();
        if (method == "mining.set_difficulty")
            r.set_difficulty_subscription = sub[1].get<std::string>();
        else if (method == "mining.notify")
            r.notify_subscription = sub[1].get<std::string>();
    }
    r.extranonce1 = to_lower_hex(result[1].get<std::string>());
    if (r.extranonce1.empty() || !is_hex(r.extranonce1))
        throw ProtocolError("extranonce1 must be even-length hex");
    int size = result[2].get<int>();
    if (size < 1 || size > 16) throw ProtocolError("extranonce2 size out of range [1,16]");
    r.extranonce2_size = size;
    return r;
}

}  // namespace picomine
