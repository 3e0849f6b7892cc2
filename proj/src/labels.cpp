#include "mdd/labels.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace mdd {

LabelVector::LabelVector(std::vector<int> codes) : codes_(std::move(codes)) {
  if (codes_.empty()) throw Error(ErrorCode::InvalidLabels, "no labels");
  int max_code = 0;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i] < 0)
      throw Error(ErrorCode::InvalidLabels, "negative class code at position " + std::to_string(i));
    max_code = std::max(max_code, codes_[i]);
  }
  counts_.assign(static_cast<std::size_t>(max_code) + 1, 0);
  for (int c : codes_) ++counts_[static_cast<std::size_t>(c)];
  for (std::size_t r = 0; r < counts_.size(); ++r)
    if (counts_[r] == 0)
      throw Error(ErrorCode::InvalidLabels, "class code " + std::to_string(r) + " never occurs");
}

LabelVector::LabelVector(std::vector<int> codes, int declared_classes) : LabelVector(std::move(codes)) {
  if (declared_classes != classes())
    throw Error(ErrorCode::InvalidLabels, "declared " + std::to_string(declared_classes) + " classes but observed " +
                                              std::to_string(classes()));
}

namespace {

bool parse_number(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

LabelVector LabelVector::encode(const std::vector<std::string>& raw) {
  std::vector<std::string> unique = raw;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  bool numeric = true;
  std::vector<double> values(unique.size());
  for (std::size_t k = 0; k < unique.size() && numeric; ++k) numeric = parse_number(unique[k], values[k]);
  if (numeric) {
    std::vector<std::size_t> idx(unique.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::string> sorted;
    for (auto k : idx) sorted.push_back(unique[k]);
    unique = std::move(sorted);
  }

  std::map<std::string, int> code_of;
  for (std::size_t k = 0; k < unique.size(); ++k) code_of[unique[k]] = static_cast<int>(k);
  std::vector<int> codes;
  codes.reserve(raw.size());
  for (const auto& s : raw) codes.push_back(code_of.at(s));
  LabelVector y(std::move(codes));
  y.names_ = std::move(unique);
  return y;
}

}  // namespace mdd
