// Copyright 2026 The qgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qgate/errors.hpp"

namespace qgate {

/// Composite Simpson rule over uniformly spaced samples. The sample count
/// must be odd (an even number of intervals).
inline double simpson(std::span<const double> samples, double spacing) {
    const std::size_t n = samples.size();
    detail::require(n >= 3 && n % 2 == 1,
                    "simpson: need an odd number (>= 3) of samples, got " + std::to_string(n));
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        (i % 2 == 1 ? odd : even) += samples[i];
    }
    return spacing / 3.0 * (samples.front() + 4.0 * odd + 2.0 * even + samples.back());
}

/// Simpson integral of f over [a, b] with an even number of intervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
    detail::require(intervals >= 2 && intervals % 2 == 0, "simpson: interval count must be even");
    const double h = (b - a) / static_cast<double>(intervals);
    std::vector<double> y(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        y[i] = f(a + h * static_cast<double>(i));
    }
    return simpson(y, h);
}

/// Evaluates fn over inputs, spreading contiguous chunks across hardware threads.
/// Results keep input order; fn must be safe to call concurrently.
template <class In, class Fn>
auto parallel_map(std::span<const In> inputs, Fn fn) {
    using Out = std::invoke_result_t<Fn&, const In&>;
    std::vector<Out> out(inputs.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), inputs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            out[i] = fn(inputs[i]);
        }
        return out;
    }
    const std::size_t chunk = (inputs.size() + workers - 1) / workers;
    std::vector<std::future<void>> jobs;
    for (std::size_t begin = 0; begin < inputs.size(); begin += chunk) {
        const std::size_t end = std::min(inputs.size(), begin + chunk);
        jobs.push_back(std::async(std::launch::async, [&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                out[i] = fn(inputs[i]);
            }
        }));
    }
    for (auto& job : jobs) {
        job.get();
    }
    return out;
}

}  // namespace qgate
