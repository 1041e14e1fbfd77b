#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace metaproof {

/// Lazy, immutable, pull-based stream. Pulling the same Seq twice recomputes
/// its head; callers that need to resume keep the tail returned by pull().
template <typename T>
class Seq {
 public:
  using Step = std::optional<std::pair<T, Seq<T>>>;
  using Puller = std::function<Step()>;

  Seq() = default;

  static Seq empty() { return Seq(); }

  static Seq delay(Puller f) { return Seq(std::make_shared<const Puller>(std::move(f))); }

  static Seq cons(T head, Seq tail) {
    return delay([head = std::move(head), tail = std::move(tail)]() -> Step {
      return std::make_pair(head, tail);
    });
  }

  static Seq single(T value) { return cons(std::move(value), Seq()); }

  static Seq from_vector(std::vector<T> items) {
    auto shared = std::make_shared<const std::vector<T>>(std::move(items));
    return from_index(shared, 0);
  }

  Step pull() const {
    if (!pull_) return std::nullopt;
    return (*pull_)();
  }

  /// Lazy concatenation: `other` is not touched until this stream is exhausted.
  Seq append(Seq other) const {
    Seq self = *this;
    return delay([self, other]() -> Step {
      if (auto step = self.pull()) {
        return std::make_pair(std::move(step->first), step->second.append(other));
      }
      return other.pull();
    });
  }

  /// Concatenation where the second stream is only constructed on demand.
  Seq append_lazy(std::function<Seq()> make_other) const {
    Seq self = *this;
    return delay([self, make_other]() -> Step {
      if (auto step = self.pull()) {
        return std::make_pair(std::move(step->first), step->second.append_lazy(make_other));
      }
      return make_other().pull();
    });
  }

  template <typename F>
  auto map(F f) const -> Seq<std::invoke_result_t<F, const T&>> {
    using U = std::invoke_result_t<F, const T&>;
    Seq self = *this;
    return Seq<U>::delay([self, f]() -> typename Seq<U>::Step {
      if (auto step = self.pull()) {
        return std::make_pair(f(step->first), step->second.map(f));
      }
      return std::nullopt;
    });
  }

  /// Depth-first flat map: every result from the first element precedes the second's.
  template <typename F>
  auto flat_map(F f) const -> std::invoke_result_t<F, const T&> {
    using S = std::invoke_result_t<F, const T&>;
    Seq self = *this;
    return S::delay([self, f]() -> typename S::Step {
      auto step = self.pull();
      if (!step) return std::nullopt;
      auto rest = step->second;
      return f(step->first).append_lazy([rest, f]() { return rest.flat_map(f); }).pull();
    });
  }

  std::vector<T> take(std::size_t n) const {
    std::vector<T> out;
    Seq cur = *this;
    while (out.size() < n) {
      auto step = cur.pull();
      if (!step) break;
      out.push_back(std::move(step->first));
      cur = std::move(step->second);
    }
    return out;
  }

  std::optional<T> first() const {
    if (auto step = pull()) return std::move(step->first);
    return std::nullopt;
  }

  bool is_empty() const { return !pull().has_value(); }

 private:
  explicit Seq(std::shared_ptr<const Puller> p) : pull_(std::move(p)) {}

  static Seq from_index(std::shared_ptr<const std::vector<T>> items, std::size_t i) {
    if (i >= items->size()) return Seq();
    return delay([items, i]() -> Step {
      return std::make_pair((*items)[i], from_index(items, i + 1));
    });
  }

  std::shared_ptr<const Puller> pull_;
};

}  // namespace metaproof
