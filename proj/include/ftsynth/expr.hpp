// Copyright 2026 The ftsynth Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ftsynth {

// Integer expressions used for action guards, assignment right-hand sides and
// goal predicates. Booleans are 0/1. Names may be qualified ("B.m").
//
// An Expr is parsed unbound; Bind() resolves every name to a slot in a flat
// valuation vector, after which Eval() is a plain tree walk.
class Expr {
 public:
  enum class Op {
    kConst, kVar, kNeg, kNot,
    kAdd, kSub, kMul,
    kEq, kNe, kLt, kLe, kGt, kGe,
    kAnd, kOr,
  };

  Expr();  // the constant 1 ("true")
  static Expr Constant(std::int64_t v);
  static Expr Variable(std::string name);
  static Expr Parse(std::string_view text);

  // Returns a copy with every variable bound; throws UndeclaredVariable when
  // the resolver returns a negative slot.
  Expr Bind(const std::function<int(std::string_view)>& resolver) const;

  std::int64_t Eval(std::span<const std::int64_t> valuation) const;
  bool Holds(std::span<const std::int64_t> valuation) const {
    return Eval(valuation) != 0;
  }

  bool IsTrivialTrue() const;
  std::vector<std::string> Reads() const;
  std::string ToString() const;

  struct Node;  // defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace ftsynth
