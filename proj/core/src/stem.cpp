// Copyright 2026 The nsum Authors.
//
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

#include "nsum/stem.hpp"

#include <algorithm>

namespace nsum {
namespace {

// Port of the reference C implementation. b[0..k] is the word being
// stemmed; j marks the end of the stem when a suffix matched.
class Porter {
 public:
  explicit Porter(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

  std::string Run() {
    if (k_ <= 1) return b_;
    Step1ab();
    if (k_ > 0) {
      Step1c();
      Step2();
      Step3();
      Step4();
      Step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  bool Cons(int i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !Cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int Measure() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!Cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (Cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!Cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool VowelInStem() const {
    for (int i = 0; i <= j_; ++i)
      if (!Cons(i)) return true;
    return false;
  }

  bool DoubleC(int j) const {
    if (j < 1) return false;
    if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)]) return false;
    return Cons(j);
  }

  // consonant-vowel-consonant ending at i, where the final consonant is not w, x or y.
  bool Cvc(int i) const {
    if (i < 2 || !Cons(i) || Cons(i - 1) || !Cons(i - 2)) return false;
    const char ch = b_[static_cast<std::size_t>(i)];
    return !(ch == 'w' || ch == 'x' || ch == 'y');
  }

  bool Ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void SetTo(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), s);
    k_ = j_ + static_cast<int>(s.size());
    b_.resize(static_cast<std::size_t>(k_ + 1));
  }

  void R(std::string_view s) {
    if (Measure() > 0) SetTo(s);
  }

  void Step1ab() {
    if (b_[static_cast<std::size_t>(k_)] == 's') {
      if (Ends("sses")) {
        k_ -= 2;
      } else if (Ends("ies")) {
        SetTo("i");
      } else if (b_[static_cast<std::size_t>(k_ - 1)] != 's') {
        --k_;
      }
      b_.resize(static_cast<std::size_t>(k_ + 1));
    }
    if (Ends("eed")) {
      if (Measure() > 0) --k_;
      b_.resize(static_cast<std::size_t>(k_ + 1));
    } else if ((Ends("ed") || Ends("ing")) && VowelInStem()) {
      k_ = j_;
      b_.resize(static_cast<std::size_t>(k_ + 1));
      if (Ends("at")) {
        SetTo("ate");
      } else if (Ends("bl")) {
        SetTo("ble");
      } else if (Ends("iz")) {
        SetTo("ize");
      } else if (DoubleC(k_)) {
        --k_;
        const char ch = b_[static_cast<std::size_t>(k_)];
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
        b_.resize(static_cast<std::size_t>(k_ + 1));
      } else if (j_ = k_, Measure() == 1 && Cvc(k_)) {
        SetTo("e");
      }
    }
  }

  void Step1c() {
    if (Ends("y") && VowelInStem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  void Step2() {
    if (k_ < 1) return;
    switch (b_[static_cast<std::size_t>(k_ - 1)]) {
      case 'a':
        if (Ends("ational")) { R("ate"); break; }
        if (Ends("tional")) { R("tion"); break; }
        break;
      case 'c':
        if (Ends("enci")) { R("ence"); break; }
        if (Ends("anci")) { R("ance"); break; }
        break;
      case 'e':
        if (Ends("izer")) { R("ize"); break; }
        break;
      case 'l':
        if (Ends("bli")) { R("ble"); break; }
        if (Ends("alli")) { R("al"); break; }
        if (Ends("entli")) { R("ent"); break; }
        if (Ends("eli")) { R("e"); break; }
        if (Ends("ousli")) { R("ous"); break; }
        break;
      case 'o':
        if (Ends("ization")) { R("ize"); break; }
        if (Ends("ation")) { R("ate"); break; }
        if (Ends("ator")) { R("ate"); break; }
        break;
      case 's':
        if (Ends("alism")) { R("al"); break; }
        if (Ends("iveness")) { R("ive"); break; }
        if (Ends("fulness")) { R("ful"); break; }
        if (Ends("ousness")) { R("ous"); break; }
        break;
      case 't':
        if (Ends("aliti")) { R("al"); break; }
        if (Ends("iviti")) { R("ive"); break; }
        if (Ends("biliti")) { R("ble"); break; }
        break;
      case 'g':
        if (Ends("logi")) { R("log"); break; }
        break;
      default:
        break;
    }
  }

  void Step3() {
    switch (b_[static_cast<std::size_t>(k_)]) {
      case 'e':
        if (Ends("icate")) { R("ic"); break; }
        if (Ends("ative")) { R(""); break; }
        if (Ends("alize")) { R("al"); break; }
        break;
      case 'i':
        if (Ends("iciti")) { R("ic"); break; }
        break;
      case 'l':
        if (Ends("ical")) { R("ic"); break; }
        if (Ends("ful")) { R(""); break; }
        break;
      case 's':
        if (Ends("ness")) { R(""); break; }
        break;
      default:
        break;
    }
  }

  void Step4() {
    if (k_ < 1) return;
    bool matched = false;
    switch (b_[static_cast<std::size_t>(k_ - 1)]) {
      case 'a': matched = Ends("al"); break;
      case 'c': matched = Ends("ance") || Ends("ence"); break;
      case 'e': matched = Ends("er"); break;
      case 'i': matched = Ends("ic"); break;
      case 'l': matched = Ends("able") || Ends("ible"); break;
      case 'n': matched = Ends("ant") || Ends("ement") || Ends("ment") || Ends("ent"); break;
      case 'o':
        if (Ends("ion") && j_ >= 0 &&
            (b_[static_cast<std::size_t>(j_)] == 's' || b_[static_cast<std::size_t>(j_)] == 't')) {
          matched = true;
        } else {
          matched = Ends("ou");
        }
        break;
      case 's': matched = Ends("ism"); break;
      case 't': matched = Ends("ate") || Ends("iti"); break;
      case 'u': matched = Ends("ous"); break;
      case 'v': matched = Ends("ive"); break;
      case 'z': matched = Ends("ize"); break;
      default: break;
    }
    if (matched && Measure() > 1) {
      k_ = j_;
      b_.resize(static_cast<std::size_t>(k_ + 1));
    }
  }

  void Step5() {
    j_ = k_;
    if (b_[static_cast<std::size_t>(k_)] == 'e') {
      const int a = Measure();
      if (a > 1 || (a == 1 && !Cvc(k_ - 1))) --k_;
    }
    if (b_[static_cast<std::size_t>(k_)] == 'l' && DoubleC(k_)) {
      j_ = k_;
      if (Measure() > 1) --k_;
    }
    b_.resize(static_cast<std::size_t>(k_ + 1));
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

bool Stemmable(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::string PorterStem(std::string_view token) {
  if (!Stemmable(token)) return std::string(token);
  return Porter(std::string(token)).Run();
}

std::string Stem(std::string_view token) {
  std::string current(token);
  while (true) {
    std::string next = PorterStem(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

}  // namespace nsum
