#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmcts {

// Index into a fixed per-game action space.
using ActionId = int;

struct Outcome {
  enum class Kind { ongoing, draw, win };
  Kind kind = Kind::ongoing;
  int winner = -1;  // player id, valid iff kind == win

  bool terminal() const { return kind != Kind::ongoing; }
  static Outcome ongoing() { return {Kind::ongoing, -1}; }
  static Outcome draw() { return {Kind::draw, -1}; }
  static Outcome win(int player) { return {Kind::win, player}; }
  bool operator==(const Outcome&) const = default;
};

class IllegalActionError : public std::runtime_error {
 public:
  explicit IllegalActionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Immutable game state. apply() returns a fresh state; instances are safe to
// share read-only across threads.
class State {
 public:
  virtual ~State() = default;

  virtual std::unique_ptr<State> clone() const = 0;
  virtual int action_count() const = 0;
  virtual int to_move() const = 0;
  virtual int move_count() const = 0;
  virtual Outcome outcome() const = 0;
  virtual std::vector<ActionId> legal_actions() const = 0;
  virtual bool is_legal(ActionId a) const = 0;
  // Throws IllegalActionError if a is occupied/out of range or the state is
  // terminal.
  virtual std::unique_ptr<State> apply(ActionId a) const = 0;

  virtual int encoding_size() const = 0;
  virtual void encode(std::vector<double>& out) const = 0;

  std::vector<double> encode() const {
    std::vector<double> v;
    encode(v);
    return v;
  }
  bool terminal() const { return outcome().terminal(); }
};

// Gomoku (m-in-a-row on a square board). Players: 0 = black (moves first),
// 1 = white.
class GomokuState final : public State {
 public:
  static constexpr int8_t kEmpty = -1;

  GomokuState(int board_size = 15, int win_length = 5);

  std::unique_ptr<State> clone() const override;
  int action_count() const override { return size_ * size_; }
  int to_move() const override { return move_count_ & 1; }
  int move_count() const override { return move_count_; }
  Outcome outcome() const override { return outcome_; }
  std::vector<ActionId> legal_actions() const override;
  bool is_legal(ActionId a) const override;
  std::unique_ptr<State> apply(ActionId a) const override;

  // Two binary planes from the mover's perspective (own stones, opponent
  // stones) followed by a side-to-move scalar: +1 black to move, -1 white.
  int encoding_size() const override { return 2 * size_ * size_ + 1; }
  void encode(std::vector<double>& out) const override;

  int board_size() const { return size_; }
  int win_length() const { return win_; }
  int8_t cell(int idx) const { return board_[idx]; }
  std::optional<ActionId> last_move() const { return last_move_; }

  // One row per line: '.' empty, 'x' black, 'o' white.
  std::string to_text() const;
  // Reconstructs a state from to_text() output. to_move is derived from the
  // stone-count parity; throws std::invalid_argument on malformed boards.
  static GomokuState from_text(const std::string& text, int win_length = 5);

 private:
  Outcome scan_from(int idx) const;
  Outcome full_scan() const;

  int size_;
  int win_;
  int move_count_ = 0;
  std::optional<ActionId> last_move_;
  Outcome outcome_ = Outcome::ongoing();
  std::vector<int8_t> board_;
};

}  // namespace pmcts
