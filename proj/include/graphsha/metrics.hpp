#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphsha/matrix.hpp"

namespace graphsha {

struct MetricsReport {
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> per_class_recall;
    std::vector<std::vector<int>> confusion;  // [true][pred]
    std::optional<double> misclassified_minor_prob;

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row(const std::string& method, uint64_t seed) const;
};

// Accuracy, balanced accuracy (mean recall over classes present in mask),
// macro-F1 (0/0 -> 0; classes absent from the mask excluded).
MetricsReport evaluate(const std::vector<int>& preds, const std::vector<int>& labels,
                       const std::vector<uint8_t>& mask, int num_classes);

// Among misclassified samples in the mask, the fraction predicted into a
// minor class; nullopt when nothing is misclassified.
std::optional<double> misclassified_minor_probability(const std::vector<int>& preds,
                                                      const std::vector<int>& labels,
                                                      const std::vector<uint8_t>& mask,
                                                      const std::vector<int>& minor_classes);

// The floor(C/2) classes with the fewest training samples, ties by index.
std::vector<int> minor_class_set(const std::vector<int>& class_counts_train);

}  // namespace graphsha
