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

#ifndef DSPDEC_LAYOUT_H
#define DSPDEC_LAYOUT_H

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dspdec {

using Index = Eigen::Index;

// One named tensor factor of a composite space.
struct Factor {
  std::string name;
  Index dim = 0;

  bool operator==(const Factor& other) const = default;
};

// An ordered list of named tensor factors.  Operators carry a layout so that
// subsystems are always located by label rather than by position; basis
// indices enumerate factors left to right, leftmost factor most significant
// (the usual Kronecker-product convention).
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  SubsystemLayout(std::initializer_list<Factor> factors);
  explicit SubsystemLayout(std::vector<Factor> factors);

  Index total_dim() const;
  size_t factor_count() const { return factors_.size(); }
  const Factor& factor(size_t i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }
  std::vector<std::string> factor_names() const;

  bool has(std::string_view name) const;
  // Position of the named factor; throws std::invalid_argument if absent.
  size_t position_of(std::string_view name) const;
  Index dim_of(std::string_view name) const;

  // Layout for this space followed by `other`; throws on a name collision.
  SubsystemLayout concatenated(const SubsystemLayout& other) const;

  // Layout containing only the named factors, in the order given.
  SubsystemLayout subset(const std::vector<std::string>& names) const;

  // Layout with the named factors removed.
  SubsystemLayout without(const std::vector<std::string>& names) const;

  // Replaces the run of adjacent factors `names` (which must appear
  // consecutively in the given order) by a single factor with the product
  // dimension.  Basis indices are unchanged.
  SubsystemLayout merged(const std::vector<std::string>& names,
                         const std::string& merged_name) const;

  // Replaces the named factor by the factors of `parts`, whose total
  // dimension must match.  Basis indices are unchanged.
  SubsystemLayout split(std::string_view name,
                        const SubsystemLayout& parts) const;

  bool operator==(const SubsystemLayout& other) const = default;

  std::string to_string() const;

 private:
  void check_unique_names() const;

  std::vector<Factor> factors_;
};

namespace detail {

// Basis-index permutation that moves the factors named in `front` (in that
// order) before the remaining factors (in their original order).  Entry i of
// the result is the old basis index that lands at new basis index i.
std::vector<Index> front_permutation(const SubsystemLayout& layout,
                                     const std::vector<std::string>& front);

// The layout after applying front_permutation.
SubsystemLayout fronted_layout(const SubsystemLayout& layout,
                               const std::vector<std::string>& front);

}  // namespace detail

}  // namespace dspdec

#endif  // DSPDEC_LAYOUT_H
