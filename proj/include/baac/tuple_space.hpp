#ifndef BAAC_TUPLE_SPACE_HPP
#define BAAC_TUPLE_SPACE_HPP

#include <condition_variable>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace baac {

struct Tuple {
  std::string tag;
  std::vector<std::string> fields;
  long id = 0;
};

// Positional pattern: tag must match; a field matches when the pattern
// slot is empty or equal. Shorter patterns match any suffix.
struct TuplePattern {
  std::string tag;
  std::vector<std::optional<std::string>> fields;

  bool matches(const Tuple& t) const;
};

class TupleSpaceClosed : public std::runtime_error {
 public:
  TupleSpaceClosed() : std::runtime_error("tuple space is closed") {}
};

// Linda-style associative store: out appends atomically, rd reads without
// removing, in removes-and-returns. Matches return the oldest tuple.
// Blocking variants wait for a match or for the space to close.
class TupleSpace {
 public:
  Tuple out(std::string tag, std::vector<std::string> fields);
  std::optional<Tuple> rd(const TuplePattern& p) const;
  std::vector<Tuple> rd_all(const TuplePattern& p) const;
  std::optional<Tuple> in(const TuplePattern& p);
  Tuple rd_wait(const TuplePattern& p);
  Tuple in_wait(const TuplePattern& p);

  void close();
  bool closed() const;

 private:
  void check_open() const;  // callers hold mu_

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<Tuple> tuples_;
  long next_id_ = 1;
  bool closed_ = false;
};

}  // namespace baac

#endif
