#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace cops {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Task { regression, classification };

inline const char* task_name(Task t) {
    return t == Task::regression ? "regression" : "classification";
}

inline Task parse_task(std::string_view name) {
    if (name == "regression") return Task::regression;
    if (name == "classification") return Task::classification;
    throw std::invalid_argument("unknown task '" + std::string(name) +
                                "' (expected regression or classification)");
}

} // namespace cops
