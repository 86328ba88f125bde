#pragma once

#include <stdexcept>
#include <string>

namespace sgsp {

/// A construction declined for a sound numerical reason (divergent weight
/// tail, no admissible eigenvalue dictionary, ...). Distinct from
/// std::invalid_argument, which flags caller mistakes.
class Refusal : public std::runtime_error {
  public:
    explicit Refusal(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgsp
