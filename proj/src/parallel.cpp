#include "wishart/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace wishart {

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("WISHART_LDP_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) return std::min(hw, cap);
        } catch (...) {
            // Unparseable cap falls back to the hardware count.
        }
    }
    return hw;
}

void parallel_for(size_t count, const std::function<void(size_t, size_t)>& fn) {
    if (count == 0) return;
    const int workers = std::min<size_t>(worker_count(), count);
    if (workers <= 1) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const size_t begin = std::min(count, static_cast<size_t>(w) * chunk);
        const size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

double pairwise_sum(const double* data, size_t count) {
    if (count == 0) return 0.0;
    if (count <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < count; ++i) s += data[i];
        return s;
    }
    const size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

MeanVar mean_variance(const std::vector<double>& v) {
    MeanVar mv;
    if (v.empty()) return mv;
    mv.mean = pairwise_sum(v) / static_cast<double>(v.size());
    if (v.size() < 2) return mv;
    std::vector<double> sq(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - mv.mean;
        sq[i] = d * d;
    }
    mv.variance = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
    return mv;
}

}  // namespace wishart
