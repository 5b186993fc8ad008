// Copyright 2026 The dspdec developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dspdec/layout.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dspdec {

SubsystemLayout::SubsystemLayout(std::initializer_list<Factor> factors)
    : factors_(factors) {
  check_unique_names();
}

SubsystemLayout::SubsystemLayout(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  check_unique_names();
}

void SubsystemLayout::check_unique_names() const {
  std::set<std::string> seen;
  for (const Factor& f : factors_) {
    if (f.dim <= 0) {
      throw std::invalid_argument("layout factor '" + f.name +
                                  "' has non-positive dimension");
    }
    if (!seen.insert(f.name).second) {
      throw std::invalid_argument("duplicate factor name '" + f.name +
                                  "' in layout");
    }
  }
}

Index SubsystemLayout::total_dim() const {
  Index d = 1;
  for (const Factor& f : factors_) d *= f.dim;
  return d;
}

std::vector<std::string> SubsystemLayout::factor_names() const {
  std::vector<std::string> names;
  names.reserve(factors_.size());
  for (const Factor& f : factors_) names.push_back(f.name);
  return names;
}

bool SubsystemLayout::has(std::string_view name) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.name == name; });
}

size_t SubsystemLayout::position_of(std::string_view name) const {
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].name == name) return i;
  }
  throw std::invalid_argument("no factor named '" + std::string(name) +
                              "' in layout " + to_string());
}

Index SubsystemLayout::dim_of(std::string_view name) const {
  return factors_[position_of(name)].dim;
}

SubsystemLayout SubsystemLayout::concatenated(
    const SubsystemLayout& other) const {
  std::vector<Factor> all = factors_;
  all.insert(all.end(), other.factors_.begin(), other.factors_.end());
  return SubsystemLayout(std::move(all));
}

SubsystemLayout SubsystemLayout::subset(
    const std::vector<std::string>& names) const {
  std::vector<Factor> picked;
  picked.reserve(names.size());
  for (const std::string& n : names) picked.push_back(factors_[position_of(n)]);
  return SubsystemLayout(std::move(picked));
}

SubsystemLayout SubsystemLayout::without(
    const std::vector<std::string>& names) const {
  for (const std::string& n : names) (void)position_of(n);
  std::vector<Factor> kept;
  for (const Factor& f : factors_) {
    if (std::find(names.begin(), names.end(), f.name) == names.end()) {
      kept.push_back(f);
    }
  }
  return SubsystemLayout(std::move(kept));
}

SubsystemLayout SubsystemLayout::merged(const std::vector<std::string>& names,
                                        const std::string& merged_name) const {
  if (names.empty()) throw std::invalid_argument("merged: empty name list");
  size_t start = position_of(names.front());
  Index dim = 1;
  for (size_t i = 0; i < names.size(); ++i) {
    size_t pos = position_of(names[i]);
    if (pos != start + i) {
      throw std::invalid_argument(
          "merged: factors must be adjacent and in order in layout " +
          to_string());
    }
    dim *= factors_[pos].dim;
  }
  std::vector<Factor> result(factors_.begin(), factors_.begin() + start);
  result.push_back(Factor{merged_name, dim});
  result.insert(result.end(), factors_.begin() + start + names.size(),
                factors_.end());
  return SubsystemLayout(std::move(result));
}

SubsystemLayout SubsystemLayout::split(std::string_view name,
                                       const SubsystemLayout& parts) const {
  size_t pos = position_of(name);
  if (parts.total_dim() != factors_[pos].dim) {
    throw std::invalid_argument("split: part dimensions do not multiply to " +
                                std::to_string(factors_[pos].dim));
  }
  std::vector<Factor> result(factors_.begin(), factors_.begin() + pos);
  result.insert(result.end(), parts.factors().begin(), parts.factors().end());
  result.insert(result.end(), factors_.begin() + pos + 1, factors_.end());
  return SubsystemLayout(std::move(result));
}

std::string SubsystemLayout::to_string() const {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) out << ", ";
    out << factors_[i].name << ":" << factors_[i].dim;
  }
  out << "]";
  return out.str();
}

namespace detail {

SubsystemLayout fronted_layout(const SubsystemLayout& layout,
                               const std::vector<std::string>& front) {
  return layout.subset(front).concatenated(layout.without(front));
}

std::vector<Index> front_permutation(const SubsystemLayout& layout,
                                     const std::vector<std::string>& front) {
  const size_t n = layout.factor_count();
  // Order of old factor positions in the new layout.
  std::vector<size_t> order;
  order.reserve(n);
  for (const std::string& name : front) order.push_back(layout.position_of(name));
  for (size_t i = 0; i < n; ++i) {
    if (std::find(order.begin(), order.end(), i) == order.end()) {
      order.push_back(i);
    }
  }

  // Stride of each factor in the original index.
  std::vector<Index> stride(n, 1);
  for (size_t i = n; i-- > 1;) {
    stride[i - 1] = stride[i] * layout.factor(i).dim;
  }

  std::vector<Index> perm(layout.total_dim());
  std::vector<Index> digits(n, 0);
  for (Index new_index = 0; new_index < layout.total_dim(); ++new_index) {
    // Decode new_index into per-factor digits in the new factor order.
    Index rem = new_index;
    for (size_t i = n; i-- > 0;) {
      Index d = layout.factor(order[i]).dim;
      digits[i] = rem % d;
      rem /= d;
    }
    Index old_index = 0;
    for (size_t i = 0; i < n; ++i) old_index += digits[i] * stride[order[i]];
    perm[new_index] = old_index;
  }
  return perm;
}

}  // namespace detail

}  // namespace dspdec
