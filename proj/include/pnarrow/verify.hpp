#pragma once

// Oracle and invariant suite behind `pnarrow verify`.

#include <functional>
#include <string>
#include <vector>

namespace pnarrow {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs every check; `on_check` sees each result as soon as it is known.
std::vector<Check> run_verification(unsigned workers = 0,
                                    const std::function<void(const Check&)>& on_check = {});

}  // namespace pnarrow
