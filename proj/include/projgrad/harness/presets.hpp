#pragma once

#include <string>
#include <vector>

namespace projgrad {

// Built-in experiment configurations reproducing the benchmark setups:
// qp-fig1, svm-finite-n10, svm-finite-n100, svm-online-n10, svm-online-n100.
std::vector<std::string> preset_names();
bool has_preset(const std::string& name);
std::string emit_preset(const std::string& name);  // throws on unknown name

}  // namespace projgrad
