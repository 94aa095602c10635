#include "pmcts/game.hpp"

#include <sstream>

namespace pmcts {

GomokuState::GomokuState(int board_size, int win_length)
    : size_(board_size), win_(win_length) {
  if (board_size < 2 || win_length < 2 || win_length > board_size) {
    throw std::invalid_argument("bad board_size/win_length");
  }
  board_.assign(static_cast<size_t>(size_) * size_, kEmpty);
}

std::unique_ptr<State> GomokuState::clone() const {
  return std::make_unique<GomokuState>(*this);
}

std::vector<ActionId> GomokuState::legal_actions() const {
  std::vector<ActionId> out;
  if (outcome_.terminal()) return out;
  out.reserve(board_.size() - static_cast<size_t>(move_count_));
  for (int i = 0; i < static_cast<int>(board_.size()); ++i) {
    if (board_[i] == kEmpty) out.push_back(i);
  }
  return out;
}

bool GomokuState::is_legal(ActionId a) const {
  return !outcome_.terminal() && a >= 0 &&
         a < static_cast<int>(board_.size()) && board_[a] == kEmpty;
}

std::unique_ptr<State> GomokuState::apply(ActionId a) const {
  if (outcome_.terminal()) {
    throw IllegalActionError("apply on terminal state");
  }
  if (a < 0 || a >= static_cast<int>(board_.size()) || board_[a] != kEmpty) {
    throw IllegalActionError("cell occupied or out of range: " +
                             std::to_string(a));
  }
  auto next = std::make_unique<GomokuState>(*this);
  next->board_[a] = static_cast<int8_t>(to_move());
  next->last_move_ = a;
  next->move_count_ = move_count_ + 1;
  next->outcome_ = next->scan_from(a);
  return next;
}

// Line scan through the last placed stone only; the rest of the board cannot
// have changed.
Outcome GomokuState::scan_from(int idx) const {
  const int8_t who = board_[idx];
  const int r0 = idx / size_, c0 = idx % size_;
  static constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (const auto& d : kDirs) {
    int run = 1;
    for (int s : {-1, 1}) {
      int r = r0 + s * d[0], c = c0 + s * d[1];
      while (r >= 0 && r < size_ && c >= 0 && c < size_ &&
             board_[r * size_ + c] == who) {
        ++run;
        r += s * d[0];
        c += s * d[1];
      }
    }
    if (run >= win_) return Outcome::win(who);
  }
  if (move_count_ == static_cast<int>(board_.size())) return Outcome::draw();
  return Outcome::ongoing();
}

Outcome GomokuState::full_scan() const {
  static constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (int i = 0; i < static_cast<int>(board_.size()); ++i) {
    if (board_[i] == kEmpty) continue;
    const int r0 = i / size_, c0 = i % size_;
    for (const auto& d : kDirs) {
      int run = 0;
      int r = r0, c = c0;
      while (r >= 0 && r < size_ && c >= 0 && c < size_ &&
             board_[r * size_ + c] == board_[i]) {
        ++run;
        r += d[0];
        c += d[1];
      }
      if (run >= win_) return Outcome::win(board_[i]);
    }
  }
  if (move_count_ == static_cast<int>(board_.size())) return Outcome::draw();
  return Outcome::ongoing();
}

void GomokuState::encode(std::vector<double>& out) const {
  const int cells = size_ * size_;
  out.assign(static_cast<size_t>(encoding_size()), 0.0);
  const int8_t me = static_cast<int8_t>(to_move());
  for (int i = 0; i < cells; ++i) {
    if (board_[i] == kEmpty) continue;
    if (board_[i] == me) {
      out[i] = 1.0;
    } else {
      out[cells + i] = 1.0;
    }
  }
  out[2 * cells] = (to_move() == 0) ? 1.0 : -1.0;
}

std::string GomokuState::to_text() const {
  std::string s;
  s.reserve(static_cast<size_t>(size_) * (size_ + 1));
  for (int r = 0; r < size_; ++r) {
    for (int c = 0; c < size_; ++c) {
      const int8_t v = board_[r * size_ + c];
      s += (v == kEmpty) ? '.' : (v == 0 ? 'x' : 'o');
    }
    s += '\n';
  }
  return s;
}

GomokuState GomokuState::from_text(const std::string& text, int win_length) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("empty board text");
  const int n = static_cast<int>(rows.size());
  GomokuState st(n, win_length);
  int black = 0, white = 0;
  int last = -1;
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      throw std::invalid_argument("board text is not square");
    }
    for (int c = 0; c < n; ++c) {
      switch (rows[r][c]) {
        case '.':
          break;
        case 'x':
          st.board_[r * n + c] = 0;
          ++black;
          last = r * n + c;
          break;
        case 'o':
          st.board_[r * n + c] = 1;
          ++white;
          last = r * n + c;
          break;
        default:
          throw std::invalid_argument("bad cell character");
      }
    }
  }
  if (black != white && black != white + 1) {
    throw std::invalid_argument("inconsistent stone counts");
  }
  st.move_count_ = black + white;
  if (last >= 0) st.last_move_ = last;
  st.outcome_ = st.full_scan();
  return st;
}

}  // namespace pmcts
