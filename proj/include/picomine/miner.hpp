// The mining loop: one coordinator owning the pool session, k workers scanning
// disjoint nonce ranges over immutable work snapshots. Workers never touch the
// socket; all handoff goes through a message queue.
#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "picomine/client.hpp"
#include "picomine/log.hpp"
#include "picomine/work.hpp"

namespace picomine {

struct MineOptions {
    ClientOptions client;
    int workers = 1;
    HashImpl impl = HashImpl::Optimized;
    double max_duration_s = 0.0;   // 0 = run until another limit stops us
    uint64_t max_accepted = 0;     // stop after this many accepted shares; 0 = no limit
    uint64_t chunk_size = uint64_t{1} << 18;  // nonces per interruptible slice
    bool reconnect = false;
    int max_reconnects = 5;
};

struct MineSummary {
    uint64_t submitted = 0;
    uint64_t accepted = 0;
    uint64_t rejected = 0;        // all rejections, including low difficulty
    uint64_t low_difficulty = 0;  // rejections carrying the low-difficulty code
    uint64_t stale_dropped = 0;   // shares discarded before submission (superseded work)
    uint64_t hashes = 0;
    uint64_t block_solves = 0;    // accepted shares that also met the network target
    bool auth_failed = false;
    int reconnects = 0;
    double duration_s = 0.0;
};

namespace detail {

struct WorkerAssignment {
    uint64_t generation = 0;
    WorkUnit unit;
    uint32_t start = 0;
    uint64_t count = 0;
};

struct WorkerMessage {
    enum class Kind { Found, Exhausted };
    Kind kind = Kind::Exhausted;
    uint64_t generation = 0;
    int worker = 0;
    Share share;
};

// State shared between the coordinator and the workers.
struct MineBoard {
    std::mutex mutex;
    std::condition_variable work_cv;
    std::vector<std::optional<WorkerAssignment>> slots;
    bool stop = false;

    std::mutex outbox_mutex;
    std::deque<WorkerMessage> outbox;

    std::atomic<uint64_t> hashes{0};

    void post(WorkerMessage msg) {
        std::lock_guard lock(outbox_mutex);
        outbox.push_back(std::move(msg));
    }

    std::vector<WorkerMessage> drain() {
        std::lock_guard lock(outbox_mutex);
        std::vector<WorkerMessage> out(outbox.begin(), outbox.end());
        outbox.clear();
        return out;
    }
};

inline void mine_worker(MineBoard& board, int index, HashImpl impl, uint64_t chunk_size) {
    uint64_t last_generation = 0;
    for (;;) {
        WorkerAssignment assignment;
        {
            std::unique_lock lock(board.mutex);
            board.work_cv.wait(lock, [&] {
                return board.stop ||
                       (board.slots[index] && board.slots[index]->generation > last_generation);
            });
            if (board.stop) return;
            assignment = *board.slots[index];
        }
        last_generation = assignment.generation;

        uint32_t nonce = assignment.start;
        uint64_t remaining = assignment.count;
        bool abandoned = false;
        while (remaining > 0) {
            uint64_t budget = std::min(remaining, chunk_size);
            SearchOutcome outcome =
                search_nonce(assignment.unit.header_prefix, assignment.unit.share_target, nonce,
                             budget, impl);
            board.hashes += outcome.hashes_attempted;
            if (outcome.found) {
                Share share;
                share.job_id = assignment.unit.job_id;
                share.extranonce2 = assignment.unit.extranonce2;
                share.ntime = assignment.unit.ntime;
                share.nonce = outcome.found->first;
                share.hash = outcome.found->second;
                board.post({WorkerMessage::Kind::Found, assignment.generation, index,
                            std::move(share)});
                // resume just past the hit; the range may hold more shares
                uint64_t used = outcome.found->first - nonce + 1;
                remaining -= used;
                nonce = outcome.found->first + 1;
                if (remaining == 0) break;
            } else {
                remaining -= outcome.hashes_attempted;
                nonce += static_cast<uint32_t>(outcome.hashes_attempted);
            }
            std::lock_guard lock(board.mutex);
            if (board.stop) return;
            if (board.slots[index] && board.slots[index]->generation > last_generation) {
                abandoned = true;  // superseded mid-scan
                break;
            }
        }
        if (!abandoned)
            board.post({WorkerMessage::Kind::Exhausted, assignment.generation, index, {}});
    }
}

}  // namespace detail

inline MineSummary run_miner(const MineOptions& options) {
    using clock = std::chrono::steady_clock;
    if (options.workers < 1) throw std::invalid_argument("need at least one worker");

    MineSummary summary;
    auto t0 = clock::now();
    auto elapsed_s = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };
    auto out_of_time = [&] {
        return options.max_duration_s > 0 && elapsed_s() >= options.max_duration_s;
    };
    auto enough_shares = [&] {
        return options.max_accepted > 0 && summary.accepted >= options.max_accepted;
    };

    detail::MineBoard board;
    board.slots.resize(options.workers);
    std::vector<std::thread> workers;
    workers.reserve(options.workers);
    for (int w = 0; w < options.workers; ++w)
        workers.emplace_back(detail::mine_worker, std::ref(board), w, options.impl,
                             options.chunk_size);
    auto shut_down_workers = [&] {
        {
            std::lock_guard lock(board.mutex);
            board.stop = true;
        }
        board.work_cv.notify_all();
        for (auto& t : workers) t.join();
    };

    StratumClient client(options.client);

    uint64_t generation = 0;        // bumped on every (re)assignment
    uint64_t clean_floor = 0;       // shares from generations below this are stale
    uint64_t last_clean_gen = 0;    // session clean counter already handled
    std::string current_job_id;
    std::map<std::string, std::string> extranonce2_by_job;
    std::map<uint64_t, WorkUnit> unit_by_generation;
    std::set<int> exhausted_workers;
    ReconnectBackoff backoff;

    auto assign_from_job = [&](const JobNotification& job) {
        const SessionState& s = client.state();
        std::string& e2 = extranonce2_by_job[job.job_id];
        if (e2.empty()) e2 = std::string(2 * s.extranonce2_size, '0');
        WorkUnit unit =
            make_work_unit(job, s.extranonce1, e2, s.extranonce2_size, s.current_difficulty);
        ++generation;
        unit_by_generation[generation] = unit;
        while (unit_by_generation.size() > 64) unit_by_generation.erase(unit_by_generation.begin());
        exhausted_workers.clear();
        current_job_id = job.job_id;
        auto ranges = split_nonce_ranges(options.workers);
        {
            std::lock_guard lock(board.mutex);
            for (int w = 0; w < options.workers; ++w)
                board.slots[w] =
                    detail::WorkerAssignment{generation, unit, ranges[w].first, ranges[w].second};
        }
        board.work_cv.notify_all();
        log_info("work_assigned", {{"job", job.job_id},
                                   {"extranonce2", e2},
                                   {"generation", std::to_string(generation)}});
    };

    // Reconcile with whatever notifications the client ingested since last look.
    auto sync_with_session = [&] {
        SessionState& s = client.state();
        if (s.job_queue.empty()) return;
        if (s.clean_generation != last_clean_gen) {
            last_clean_gen = s.clean_generation;
            assign_from_job(s.job_queue.back());
            clean_floor = generation;  // everything before the clean is dead
        } else if (s.job_queue.back().job_id != current_job_id) {
            assign_from_job(s.job_queue.back());  // newest-job policy; old shares stay valid
        }
    };

    auto clear_assignments = [&] {
        std::lock_guard lock(board.mutex);
        ++generation;
        for (auto& slot : board.slots) slot.reset();
        exhausted_workers.clear();
    };

    auto connect_once = [&]() -> bool {
        client.connect_and_handshake();
        // the first job normally lands within moments of authorization
        auto deadline = clock::now() +
                        std::chrono::milliseconds(options.client.response_timeout_ms);
        while (client.state().job_queue.empty() && clock::now() < deadline) client.poll(50);
        if (client.state().job_queue.empty()) throw TimeoutError("no job after handshake");
        last_clean_gen = client.state().clean_generation;
        assign_from_job(client.state().job_queue.back());
        clean_floor = generation;  // prior connection's work means nothing here
        return true;
    };

    try {
        connect_once();
        backoff.reset();

        bool running = true;
        while (running && !out_of_time() && !enough_shares()) {
            try {
                for (detail::WorkerMessage& msg : board.drain()) {
                    if (msg.kind == detail::WorkerMessage::Kind::Found) {
                        if (msg.generation < clean_floor) {
                            ++summary.stale_dropped;
                            log_info("share_stale_dropped", {{"job", msg.share.job_id}});
                            continue;
                        }
                        SubmitResult result = client.submit_share(msg.share);
                        ++summary.submitted;
                        if (result.accepted) {
                            ++summary.accepted;
                            auto it = unit_by_generation.find(msg.generation);
                            if (it != unit_by_generation.end() &&
                                hash_meets_target(msg.share.hash, it->second.network_target))
                                ++summary.block_solves;
                            log_info("share_accepted",
                                     {{"job", msg.share.job_id},
                                      {"nonce", u32_to_hex(msg.share.nonce)},
                                      {"total", std::to_string(summary.accepted)}});
                        } else {
                            ++summary.rejected;
                            int code = result.error ? result.error->code : 0;
                            if (code == 23) ++summary.low_difficulty;
                            log_warn("share_rejected",
                                     {{"job", msg.share.job_id},
                                      {"code", std::to_string(code)},
                                      {"reason", result.error ? result.error->message : "?"}});
                        }
                        sync_with_session();
                        if (enough_shares() || out_of_time()) break;
                    } else if (msg.generation == generation) {
                        exhausted_workers.insert(msg.worker);
                        if (exhausted_workers.size() == static_cast<size_t>(options.workers)) {
                            // whole nonce space done: roll extranonce2, same job
                            const SessionState& s = client.state();
                            std::string& e2 = extranonce2_by_job[current_job_id];
                            e2 = next_extranonce2(e2, s.extranonce2_size);
                            for (const JobNotification& job : s.job_queue) {
                                if (job.job_id == current_job_id) {
                                    assign_from_job(job);
                                    break;
                                }
                            }
                        }
                    }
                }
                client.poll(20);
                sync_with_session();
            } catch (const NetError& e) {
                log_warn("connection_lost", {{"what", e.what()}});
                clear_assignments();
                client.disconnect();
                if (!options.reconnect || summary.reconnects >= options.max_reconnects) {
                    running = false;
                    break;
                }
                ++summary.reconnects;
                double delay = backoff.next_delay_s();
                log_info("reconnecting", {{"delay_s", std::to_string(delay)}});
                auto until = clock::now() + std::chrono::duration<double>(delay);
                while (clock::now() < until && !out_of_time())
                    std::this_thread::sleep_for(std::chrono::milliseconds(50));
                if (out_of_time()) break;
                try {
                    connect_once();
                    backoff.reset();
                } catch (const AuthRejected&) {
                    summary.auth_failed = true;
                    running = false;
                } catch (const NetError&) {
                    // next loop iteration retries through the same path
                }
            }
        }
    } catch (const AuthRejected& e) {
        log_error("authorization_failed", {{"what", e.what()}});
        summary.auth_failed = true;
    } catch (const NetError& e) {
        log_error("connection_failed", {{"what", e.what()}});
    }

    shut_down_workers();
    client.disconnect();
    summary.hashes = board.hashes.load();
    summary.duration_s = elapsed_s();
    log_info("miner_done", {{"accepted", std::to_string(summary.accepted)},
                            {"rejected", std::to_string(summary.rejected)},
                            {"hashes", std::to_string(summary.hashes)},
                            {"duration_s", std::to_string(summary.duration_s)}});
    return summary;
}

}  // namespace picomine
