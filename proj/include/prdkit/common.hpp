#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace prdkit {

/// Malformed input file (CSV/NPY/RAW/JSON). The CLI maps this to exit code 3.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric precondition failures derive from std::invalid_argument so the CLI
// can map the whole class to exit code 4.
struct InvalidSplitError : std::invalid_argument {
    explicit InvalidSplitError(const std::string& what) : std::invalid_argument(what) {}
};

struct NotPsdError : std::invalid_argument {
    explicit NotPsdError(const std::string& what) : std::invalid_argument(what) {}
};

struct UndefinedMedianError : std::invalid_argument {
    explicit UndefinedMedianError(const std::string& what) : std::invalid_argument(what) {}
};

struct UndefinedIouError : std::invalid_argument {
    explicit UndefinedIouError(const std::string& what) : std::invalid_argument(what) {}
};

/// Worker count: PRDKIT_THREADS if set, else hardware concurrency.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("PRDKIT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

namespace detail {
inline thread_local bool inside_parallel_worker = false;
}

/// Deterministic parallel loop. body(i) must write only to state owned by
/// index i, so the result does not depend on the number of worker threads.
/// Nested calls from inside a worker run serially.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = thread_cap();
    if (workers <= 1 || count <= 1 || detail::inside_parallel_worker) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        detail::inside_parallel_worker = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
}

}  // namespace prdkit
