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

#include <optional>
#include <sstream>

#include "ftsynth/error.hpp"
#include "ftsynth/game.hpp"

namespace ftsynth {

namespace {

constexpr std::string_view kGameHeader = "ftsynth-game 1";
constexpr std::string_view kStrategyHeader = "ftsynth-strategy 1";

// Line reader with one line of lookahead; skips blank lines and '#' comments.
class Lines {
 public:
  explicit Lines(std::string_view text) : in_(std::string(text)) {}

  const std::string* Peek() {
    if (!pending_) {
      std::string line;
      while (std::getline(in_, line)) {
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        pending_ = line.substr(first);
        break;
      }
    }
    return pending_ ? &*pending_ : nullptr;
  }

  std::string Take(std::string_view what) {
    if (!Peek()) Fail("unexpected end of input, expected " + std::string(what));
    std::string out = std::move(*pending_);
    pending_.reset();
    return out;
  }

  [[noreturn]] void Fail(const std::string& msg) const {
    throw Error(ErrorCode::kParse, "line " + std::to_string(number_) + ": " + msg);
  }

 private:
  std::istringstream in_;
  std::optional<std::string> pending_;
  int number_ = 0;
};

bool StartsWith(const std::string* line, std::string_view word) {
  if (!line || line->compare(0, word.size(), word) != 0) return false;
  return line->size() == word.size() || (*line)[word.size()] == ' ';
}

void ExpectHeader(Lines& lines, std::string_view header) {
  std::string line = lines.Take("header");
  while (!line.empty() && line.back() == ' ') line.pop_back();
  if (line != header) lines.Fail("expected '" + std::string(header) + "'");
}

int ReadCount(Lines& lines, std::string_view keyword) {
  std::istringstream s(lines.Take(keyword));
  std::string k;
  int n = -1;
  if (!(s >> k >> n) || k != keyword || n < 0) lines.Fail("expected '" + std::string(keyword) + " <n>'");
  return n;
}

std::string TupleText(const DistributedGame& g, int id) {
  std::string s;
  for (int x : g.Tuple(id)) {
    if (!s.empty()) s += ' ';
    s += std::to_string(x);
  }
  return s;
}

std::vector<int> ParseTuple(std::istringstream& s, const DistributedGame& g, Lines& lines) {
  std::vector<int> t(g.components());
  for (int i = 0; i < g.components(); ++i) {
    if (!(s >> t[i])) lines.Fail("expected a tuple of " + std::to_string(g.components()) + " vertices");
    if (t[i] < 0 || t[i] >= g.locals[i].size()) {
      lines.Fail("vertex " + std::to_string(t[i]) + " out of range for " + g.locals[i].name);
    }
  }
  return t;
}

int LookupTuple(DistributedGame& g, const std::vector<int>& t, Lines& lines) {
  int id = g.Find(t);
  if (id < 0) lines.Fail("tuple is not in the universe");
  return id;
}

}  // namespace

std::string WriteGame(const DistributedGame& game) {
  std::ostringstream os;
  os << kGameHeader << "\n";
  os << "semantics " << (game.semantics == Semantics::kSimultaneous ? "simultaneous" : "interleaved")
     << "\n";
  os << "games " << game.components() << "\n";
  for (const auto& g : game.locals) {
    os << "game " << g.size() << " " << g.name << "\n";
    for (int v = 0; v < g.size(); ++v) os << "v " << int(g.owner[v]) << " " << g.labels[v] << "\n";
    for (int v = 0; v < g.size(); ++v) {
      for (int w : g.edges[v]) os << "e " << v << " " << w << "\n";
    }
  }
  if (game.full_product()) {
    os << "universe full\n";
  } else {
    os << "universe " << game.size() << "\n";
    for (int v = 0; v < game.size(); ++v) os << "u " << TupleText(game, v) << "\n";
  }
  for (int v = 0; v < game.size(); ++v) {
    for (int w : game.EnvSuccessors(v)) os << "x " << TupleText(game, v) << " " << TupleText(game, w) << "\n";
  }
  for (int v : game.init) os << "init " << TupleText(game, v) << "\n";
  for (int v : game.goal) os << "goal " << TupleText(game, v) << "\n";
  return os.str();
}

DistributedGame ReadGame(std::string_view text) {
  Lines lines(text);
  DistributedGame game;
  ExpectHeader(lines, kGameHeader);
  if (StartsWith(lines.Peek(), "semantics")) {
    std::istringstream s(lines.Take("semantics"));
    std::string k, mode;
    s >> k >> mode;
    if (mode == "simultaneous") {
      game.semantics = Semantics::kSimultaneous;
    } else if (mode == "interleaved") {
      game.semantics = Semantics::kInterleaved;
    } else {
      lines.Fail("unknown semantics '" + mode + "'");
    }
  }
  int n = ReadCount(lines, "games");
  if (n < 1) lines.Fail("need at least one local game");
  for (int i = 0; i < n; ++i) {
    std::istringstream s(lines.Take("game"));
    std::string k;
    int count = -1;
    LocalGame g;
    if (!(s >> k >> count) || k != "game" || count < 0) lines.Fail("expected 'game <vertices> <name>'");
    s >> std::ws;
    std::getline(s, g.name);
    for (int v = 0; v < count; ++v) {
      std::istringstream vs(lines.Take("vertex"));
      int owner = -1;
      std::string label;
      if (!(vs >> k >> owner) || k != "v" || (owner != 0 && owner != 1)) lines.Fail("expected 'v <0|1> <label>'");
      vs >> std::ws;
      std::getline(vs, label);
      g.AddVertex(label, owner);
    }
    while (StartsWith(lines.Peek(), "e")) {
      std::istringstream es(lines.Take("edge"));
      int a = -1, b = -1;
      es >> k >> a >> b;
      if (a < 0 || b < 0 || a >= g.size() || b >= g.size()) lines.Fail("edge endpoint out of range");
      g.AddEdge(a, b);
    }
    game.locals.push_back(std::move(g));
  }
  std::istringstream us(lines.Take("universe"));
  std::string k, kind;
  us >> k >> kind;
  if (k != "universe") lines.Fail("expected 'universe'");
  if (kind == "full") {
    game.InternFullProduct();
  } else {
    int count = -1;
    try {
      count = std::stoi(kind);
    } catch (const std::exception&) {
      lines.Fail("expected 'universe full' or 'universe <n>'");
    }
    for (int v = 0; v < count; ++v) {
      std::istringstream s(lines.Take("universe tuple"));
      s >> k;
      if (k != "u") lines.Fail("expected 'u <tuple>'");
      game.Intern(ParseTuple(s, game, lines));
    }
  }
  while (const std::string* line = lines.Peek()) {
    std::istringstream s(lines.Take("section"));
    s >> k;
    if (k == "x") {
      int from = LookupTuple(game, ParseTuple(s, game, lines), lines);
      int to = LookupTuple(game, ParseTuple(s, game, lines), lines);
      try {
        game.AddEnvEdge(from, to);
      } catch (const Error& e) {
        lines.Fail(e.what());
      }
    } else if (k == "init") {
      game.init.push_back(LookupTuple(game, ParseTuple(s, game, lines), lines));
    } else if (k == "goal") {
      game.goal.push_back(LookupTuple(game, ParseTuple(s, game, lines), lines));
    } else {
      (void)line;
      lines.Fail("unknown record '" + k + "'");
    }
  }
  return game;
}

std::string WriteStrategy(const DistributedGame& game, const DistributedStrategy& s) {
  std::ostringstream os;
  os << kStrategyHeader << "\n";
  for (std::size_t i = 0; i < s.choice.size(); ++i) {
    for (auto [from, to] : s.choice[i]) {
      os << game.locals.at(i).name << " " << from << " " << to << "\n";
    }
  }
  return os.str();
}

DistributedStrategy ReadStrategy(const DistributedGame& game, std::string_view text) {
  Lines lines(text);
  ExpectHeader(lines, kStrategyHeader);
  DistributedStrategy s(game.components());
  while (lines.Peek()) {
    std::istringstream ls(lines.Take("choice"));
    std::string name;
    int from = -1, to = -1;
    if (!(ls >> name >> from >> to)) lines.Fail("expected '<game> <from> <to>'");
    int gi = -1;
    for (int i = 0; i < game.components(); ++i) {
      if (game.locals[i].name == name) gi = i;
    }
    if (gi < 0) lines.Fail("unknown game '" + name + "'");
    const LocalGame& g = game.locals[gi];
    if (from < 0 || from >= g.size() || !g.IsControl(from)) {
      lines.Fail(std::to_string(from) + " is not a control vertex of " + name);
    }
    bool edge = false;
    for (int w : g.edges[from]) edge = edge || w == to;
    if (!edge) lines.Fail("no edge " + std::to_string(from) + " -> " + std::to_string(to) + " in " + name);
    s.Set(gi, from, to);
  }
  return s;
}

}  // namespace ftsynth
