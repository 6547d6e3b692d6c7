#include "baac/tuple_space.hpp"

#include <algorithm>

namespace baac {

bool TuplePattern::matches(const Tuple& t) const {
  if (t.tag != tag) return false;
  if (fields.size() > t.fields.size()) return false;
  for (size_t i = 0; i < fields.size(); ++i)
    if (fields[i] && *fields[i] != t.fields[i]) return false;
  return true;
}

void TupleSpace::check_open() const {
  if (closed_) throw TupleSpaceClosed();
}

Tuple TupleSpace::out(std::string tag, std::vector<std::string> fields) {
  std::lock_guard<std::mutex> lock(mu_);
  check_open();
  Tuple t{std::move(tag), std::move(fields), next_id_++};
  tuples_.push_back(t);
  cv_.notify_all();
  return t;
}

std::optional<Tuple> TupleSpace::rd(const TuplePattern& p) const {
  std::lock_guard<std::mutex> lock(mu_);
  check_open();
  for (const Tuple& t : tuples_)
    if (p.matches(t)) return t;
  return std::nullopt;
}

std::vector<Tuple> TupleSpace::rd_all(const TuplePattern& p) const {
  std::lock_guard<std::mutex> lock(mu_);
  check_open();
  std::vector<Tuple> out;
  for (const Tuple& t : tuples_)
    if (p.matches(t)) out.push_back(t);
  return out;
}

std::optional<Tuple> TupleSpace::in(const TuplePattern& p) {
  std::lock_guard<std::mutex> lock(mu_);
  check_open();
  for (auto it = tuples_.begin(); it != tuples_.end(); ++it) {
    if (p.matches(*it)) {
      Tuple t = *it;
      tuples_.erase(it);
      return t;
    }
  }
  return std::nullopt;
}

Tuple TupleSpace::rd_wait(const TuplePattern& p) {
  std::unique_lock<std::mutex> lock(mu_);
  while (true) {
    check_open();
    for (const Tuple& t : tuples_)
      if (p.matches(t)) return t;
    cv_.wait(lock);
  }
}

Tuple TupleSpace::in_wait(const TuplePattern& p) {
  std::unique_lock<std::mutex> lock(mu_);
  while (true) {
    check_open();
    for (auto it = tuples_.begin(); it != tuples_.end(); ++it) {
      if (p.matches(*it)) {
        Tuple t = *it;
        tuples_.erase(it);
        return t;
      }
    }
    cv_.wait(lock);
  }
}

void TupleSpace::close() {
  std::lock_guard<std::mutex> lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

bool TupleSpace::closed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return closed_;
}

}  // namespace baac
