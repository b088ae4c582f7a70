#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "tracelab/matrix.hpp"
#include "tracelab/value.hpp"

namespace tracelab {

/// A function on GL_n(F_q) that is constant on conjugacy classes.
/// Values are memoized by class fingerprint; the memo is shared between copies and safe across threads.
template <class V>
class ClassFunction {
 public:
  /// The rule receives one element of the class and its fingerprint.
  using Rule = std::function<V(const Matrix&, const ClassInfo&)>;

  ClassFunction(std::shared_ptr<const MatrixSpace> space, Rule rule)
      : space_(std::move(space)), state_(std::make_shared<State>()) {
    state_->rule = std::move(rule);
  }

  const MatrixSpace& space() const { return *space_; }
  std::shared_ptr<const MatrixSpace> space_ptr() const { return space_; }

  V operator()(const Matrix& g) const { return at(g, space_->fingerprint(g)); }

  V at(const Matrix& g, const ClassInfo& info) const {
    {
      std::lock_guard<std::mutex> lock(state_->mu);
      auto it = state_->memo.find(info.key);
      if (it != state_->memo.end()) return it->second;
    }
    // Evaluated outside the lock; a racing insert stores the same value.
    V v = state_->rule(g, info);
    std::lock_guard<std::mutex> lock(state_->mu);
    state_->memo.emplace(info.key, v);
    return v;
  }

  V at(const ClassRep& rep) const { return at(rep.g, rep.info); }

  std::size_t memo_size() const {
    std::lock_guard<std::mutex> lock(state_->mu);
    return state_->memo.size();
  }

 private:
  struct State {
    Rule rule;
    mutable std::mutex mu;
    std::unordered_map<std::string, V> memo;
  };
  std::shared_ptr<const MatrixSpace> space_;
  std::shared_ptr<State> state_;
};

}  // namespace tracelab
