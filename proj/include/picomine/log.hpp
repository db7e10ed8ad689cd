// Minimal structured logger: one line per event, "timestamp level event k=v ...".
#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <initializer_list>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

namespace picomine {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

using LogField = std::pair<std::string_view, std::string>;

class Logger {
public:
    static Logger& instance() {
        static Logger logger;
        return logger;
    }

    void set_stream(std::FILE* stream) {
        std::lock_guard lock(mutex_);
        stream_ = stream;
    }

    void set_level(LogLevel level) {
        std::lock_guard lock(mutex_);
        level_ = level;
    }

    void write(LogLevel level, std::string_view event, std::initializer_list<LogField> fields) {
        std::lock_guard lock(mutex_);
        if (level < level_ || stream_ == nullptr) return;
        std::string line = timestamp();
        line += ' ';
        line += level_name(level);
        line += ' ';
        line.append(event);
        for (const auto& [key, value] : fields) {
            line += ' ';
            line.append(key);
            line += '=';
            line += value;
        }
        line += '\n';
        std::fwrite(line.data(), 1, line.size(), stream_);
        std::fflush(stream_);
    }

private:
    static const char* level_name(LogLevel level) {
        switch (level) {
            case LogLevel::Debug: return "debug";
            case LogLevel::Info: return "info";
            case LogLevel::Warn: return "warn";
            case LogLevel::Error: return "error";
        }
        return "?";
    }

    static std::string timestamp() {
        using namespace std::chrono;
        auto now = system_clock::now();
        std::time_t secs = system_clock::to_time_t(now);
        auto millis = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
        std::tm tm{};
        gmtime_r(&secs, &tm);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                      tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                      static_cast<int>(millis));
        return buf;
    }

    std::mutex mutex_;
    std::FILE* stream_ = stderr;
    LogLevel level_ = LogLevel::Info;
};

inline void log_debug(std::string_view event, std::initializer_list<LogField> fields = {}) {
    Logger::instance().write(LogLevel::Debug, event, fields);
}
inline void log_info(std::string_view event, std::initializer_list<LogField> fields = {}) {
    Logger::instance().write(LogLevel::Info, event, fields);
}
inline void log_warn(std::string_view event, std::initializer_list<LogField> fields = {}) {
    Logger::instance().write(LogLevel::Warn, event, fields);
}
inline void log_error(std::string_view event, std::initializer_list<LogField> fields = {}) {
    Logger::instance().write(LogLevel::Error, event, fields);
}

}  // namespace picomine
