#pragma once

// The resil commands as library calls. Each returns the JSON report and the
// process exit code: 0 found, 1 unbounded, 2 exhausted.

#include "resil/model.hpp"

#include <optional>

namespace resil::cli {

struct Report {
    int exit_code = 0;
    Json body;
};

struct CheckOptions {
    std::optional<std::size_t> k;
    bool trace = false;
};

struct ApproxOptions {
    std::optional<std::size_t> under;
    bool over = false;
};

/// Throws Error when the model has no b_post.
Report check(const Model& m, const CheckOptions& opts = {});
Report approx(const Model& m, const ApproxOptions& opts);
Report prestar(const Model& m);
Report post(const Model& m, std::size_t depth);
Report compose(const Json& doc);

} // namespace resil::cli
