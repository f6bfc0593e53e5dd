#include "graphsha/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphsha {

MetricsReport evaluate(const std::vector<int>& preds, const std::vector<int>& labels,
                       const std::vector<uint8_t>& mask, int num_classes) {
    MetricsReport r;
    r.confusion.assign(num_classes, std::vector<int>(num_classes, 0));
    int total = 0, correct = 0;
    for (size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        r.confusion[labels[i]][preds[i]]++;
        ++total;
        if (labels[i] == preds[i]) ++correct;
    }
    if (total == 0) throw std::invalid_argument("evaluate: empty mask");
    r.accuracy = static_cast<double>(correct) / total;

    r.per_class_recall.assign(num_classes, 0.0);
    double recall_sum = 0.0, f1_sum = 0.0;
    int present = 0;
    for (int c = 0; c < num_classes; ++c) {
        const int support = std::accumulate(r.confusion[c].begin(), r.confusion[c].end(), 0);
        int predicted = 0;
        for (int t = 0; t < num_classes; ++t) predicted += r.confusion[t][c];
        if (support == 0) continue;  // class absent from mask
        ++present;
        const int tp = r.confusion[c][c];
        const double recall = static_cast<double>(tp) / support;
        r.per_class_recall[c] = recall;
        recall_sum += recall;
        const double denom = support + predicted;  // f1 = 2tp / (support + predicted)
        f1_sum += denom > 0 ? 2.0 * tp / denom : 0.0;
    }
    r.balanced_accuracy = recall_sum / present;
    r.macro_f1 = f1_sum / present;
    return r;
}

std::optional<double> misclassified_minor_probability(const std::vector<int>& preds,
                                                      const std::vector<int>& labels,
                                                      const std::vector<uint8_t>& mask,
                                                      const std::vector<int>& minor_classes) {
    std::vector<uint8_t> is_minor(*std::max_element(preds.begin(), preds.end()) + 1, 0);
    for (int c : minor_classes) {
        if (c >= static_cast<int>(is_minor.size())) is_minor.resize(c + 1, 0);
        is_minor[c] = 1;
    }
    int misclassified = 0, into_minor = 0;
    for (size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i] || preds[i] == labels[i]) continue;
        ++misclassified;
        if (is_minor[preds[i]]) ++into_minor;
    }
    if (misclassified == 0) return std::nullopt;
    return static_cast<double>(into_minor) / misclassified;
}

std::vector<int> minor_class_set(const std::vector<int>& class_counts_train) {
    const int c = static_cast<int>(class_counts_train.size());
    std::vector<int> order(c);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return class_counts_train[a] < class_counts_train[b];
    });
    order.resize(c / 2);
    std::sort(order.begin(), order.end());
    return order;
}

std::string MetricsReport::to_json() const {
    nlohmann::json doc;
    doc["accuracy"] = accuracy;
    doc["balanced_accuracy"] = balanced_accuracy;
    doc["macro_f1"] = macro_f1;
    doc["per_class_recall"] = per_class_recall;
    doc["confusion"] = confusion;
    if (misclassified_minor_prob)
        doc["misclassified_minor_prob"] = *misclassified_minor_prob;
    else
        doc["misclassified_minor_prob"] = nullptr;
    return doc.dump();
}

std::string MetricsReport::csv_header() {
    return "method,seed,accuracy,balanced_accuracy,macro_f1,misclassified_minor_prob";
}

std::string MetricsReport::to_csv_row(const std::string& method, uint64_t seed) const {
    std::ostringstream ss;
    ss << method << ',' << seed << ',' << accuracy << ',' << balanced_accuracy << ','
       << macro_f1 << ',';
    if (misclassified_minor_prob) ss << *misclassified_minor_prob;
    return ss.str();
}

}  // namespace graphsha
