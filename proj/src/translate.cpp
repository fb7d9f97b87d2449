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

#include "ftsynth/translate.hpp"

#include <algorithm>

#include "ftsynth/error.hpp"

namespace ftsynth {

PcBoundsMaps GeneratePreconditionPc(const PisemModel& model) {
  const int n_a = static_cast<int>(model.processes.size());
  std::vector<int> size(n_a);
  for (int m = 0; m < n_a; ++m) size[m] = static_cast<int>(model.processes[m].actions.size());

  PcBoundsMaps out;
  out.actions.resize(n_a);
  for (int i = 0; i < n_a; ++i) {
    const auto& acts = model.processes[i].actions;
    for (int k = 1; k <= size[i]; ++k) {
      const TimedAction& a = acts[k - 1];
      PcBounds b;
      b.low.assign(n_a, 1);
      b.up.resize(n_a);
      for (int m = 0; m < n_a; ++m) b.up[m] = size[m] + 2;
      b.low[i] = k;
      b.up[i] = k + 1;
      for (int m = 0; m < n_a; ++m) {
        if (m == i) continue;
        const auto& other = model.processes[m].actions;
        for (int n = 1; n <= size[m]; ++n) {
          const TimedAction& o = other[n - 1];
          if (a.release > o.deadline) b.low[m] = std::max(b.low[m], n + 1);  // (1)
          if (a.deadline < o.release) b.up[m] = std::min(b.up[m], n + 1);    // (2)
        }
      }
      out.actions[i].push_back(std::move(b));

      if (a.pattern.kind != ActionKind::kSend) continue;
      MessageKey key{a.pattern.network, a.pattern.message_index};
      if (out.messages.count(key)) {
        throw Error(ErrorCode::kDuplicateMessageIndex,
                    "message " + std::to_string(key.second) + " on network " +
                        std::to_string(key.first + 1) + " is sent more than once per period");
      }
      const Network& net = model.networks.at(a.pattern.network);
      Rational best = net.BestCase(a.pattern.message_index);
      Rational worst = net.Wcmtt(a.pattern.message_index);
      PcBounds mb;
      mb.low.assign(n_a, 1);
      mb.up.resize(n_a);
      for (int m = 0; m < n_a; ++m) mb.up[m] = size[m] + 2;
      mb.low[i] = k + 1;  // strictly after the send
      for (int m = 0; m < n_a; ++m) {
        const auto& other = model.processes[m].actions;
        for (int n = 1; n <= size[m]; ++n) {
          const TimedAction& o = other[n - 1];
          if (a.release + best > o.deadline) mb.low[m] = std::max(mb.low[m], n + 1);   // (3)
          if (a.deadline + worst < o.release) mb.up[m] = std::min(mb.up[m], n + 1);   // (4)
        }
      }
      out.messages[key] = std::move(mb);
      out.senders[key] = i;
    }
  }
  return out;
}

namespace {

PcBox ToBox(const PcBounds& b) {
  PcBox box;
  for (std::size_t m = 0; m < b.low.size(); ++m) box.push_back({Rational(b.low[m]), Rational(b.up[m])});
  return box;
}

}  // namespace

ImModel AbstractTiming(const PisemModel& model) {
  PcBoundsMaps maps = GeneratePreconditionPc(model);
  ImModel im;
  im.period = model.period;
  im.networks = model.networks;
  for (std::size_t i = 0; i < model.processes.size(); ++i) {
    const PisemProcess& p = model.processes[i];
    ImProcess ip;
    ip.name = p.name;
    ip.variables = p.variables;
    ip.env_variables = p.env_variables;
    ip.original_count = static_cast<int>(p.actions.size());
    for (std::size_t k = 0; k < p.actions.size(); ++k) {
      ImAction a;
      a.index = Rational(static_cast<std::int64_t>(k + 1));
      a.candidates.push_back({p.actions[k].pattern, p.actions[k].wcet});
      a.box = ToBox(maps.actions[i][k]);
      ip.actions.push_back(std::move(a));
    }
    im.processes.push_back(std::move(ip));
  }
  for (const auto& [key, b] : maps.messages) {
    im.messages.push_back({key.first, key.second, maps.senders.at(key), ToBox(b)});
  }
  return im;
}

std::vector<Rational> SlotIndices(int c, int count) {
  std::vector<Rational> out;
  for (int q = 1; q <= count; ++q) out.push_back(Rational(c) + Rational(q, count + 1));
  return out;
}

std::map<std::pair<int, int>, int> SlotPlan(const TemplatePool& pool) {
  std::map<std::pair<int, int>, int> plan;
  for (const auto& t : pool) ++plan[{t.process, t.c}];
  return plan;
}

PcBox DecideFtTiming(const ImModel& im, int process, int c, int d, const Rational& slot) {
  auto fail = [&](const std::string& why) -> PcBox {
    throw Error(ErrorCode::kNotConsecutive, "slot " + ToString(slot) + " between " +
                                                std::to_string(c) + " and " + std::to_string(d) +
                                                ": " + why);
  };
  if (process < 0 || process >= static_cast<int>(im.processes.size())) return fail("no such process");
  const ImProcess& host = im.processes[process];
  if (d != c + 1) return fail("host actions are not consecutive");
  if (IsInteger(slot) || Floor(slot) != Rational(c) || Ceil(slot) != Rational(d)) {
    return fail("slot does not lie strictly between the hosts");
  }
  const ImAction* ac = host.Find(Rational(c));
  const ImAction* ad = host.Find(Rational(d));
  if (!ac || !ad) return fail("host action missing");
  PcBox box(im.processes.size());
  for (std::size_t m = 0; m < im.processes.size(); ++m) {
    if (static_cast<int>(m) == process) {
      box[m] = {slot, Rational(d)};
    } else {
      box[m] = {ac->box[m].low, ad->box[m].up};
    }
  }
  return box;
}

ImModel InsertFtSlots(const ImModel& im, const TemplatePool& pool) {
  const int n_a = static_cast<int>(im.processes.size());
  std::map<std::pair<int, int>, std::vector<const FtTemplate*>> groups;
  for (const auto& t : pool) {
    if (t.process < 0 || t.process >= n_a) {
      throw Error(ErrorCode::kNotConsecutive, "template refers to an unknown process");
    }
    const ImProcess& host = im.processes[t.process];
    if (t.d != t.c + 1 || t.c < 1 || t.d > host.original_count) {
      throw Error(ErrorCode::kNotConsecutive,
                  host.name + ": slot between " + std::to_string(t.c) + " and " + std::to_string(t.d) +
                      " does not sit between consecutive actions");
    }
    if (t.candidates.empty()) {
      throw Error(ErrorCode::kEmptyCandidateSet,
                  host.name + ": slot between " + std::to_string(t.c) + " and " +
                      std::to_string(t.d) + " has no candidate");
    }
    groups[{t.process, t.c}].push_back(&t);
  }

  ImModel out = im;
  // New index sets first, so that remapping sees every slot.
  struct Pending {
    int process;
    int c;
    Rational index;
    const FtTemplate* tmpl;
  };
  std::vector<Pending> pending;
  for (const auto& [key, list] : groups) {
    std::vector<Rational> idx = SlotIndices(key.second, static_cast<int>(list.size()));
    for (std::size_t q = 0; q < list.size(); ++q) {
      if (out.processes[key.first].Find(idx[q])) {
        throw Error(ErrorCode::kNotConsecutive, "slot index " + ToString(idx[q]) + " already used");
      }
      ImAction a;
      a.index = idx[q];
      a.candidates = list[q]->candidates;
      a.inserted = true;
      out.processes[key.first].actions.push_back(std::move(a));
      pending.push_back({key.first, key.second, idx[q], list[q]});
    }
  }
  for (auto& p : out.processes) {
    std::sort(p.actions.begin(), p.actions.end(),
              [](const ImAction& a, const ImAction& b) { return a.index < b.index; });
  }

  // "Host k done" moves from index k to the first index after k-1.
  auto remap = [&](int m, const Rational& bound) {
    const ImProcess& p = out.processes[m];
    if (!IsInteger(bound) || bound <= Rational(1) || bound > p.End()) return bound;
    return p.Next(bound - 1);
  };
  auto remap_box = [&](PcBox& box) {
    for (int m = 0; m < n_a; ++m) {
      box[m].low = remap(m, box[m].low);
      box[m].up = remap(m, box[m].up);
    }
  };
  for (int i = 0; i < n_a; ++i) {
    for (auto& a : out.processes[i].actions) {
      if (a.inserted) continue;
      remap_box(a.box);
      a.box[i] = {a.index, out.processes[i].Next(a.index)};
    }
  }
  for (auto& msg : out.messages) remap_box(msg.box);

  for (const auto& p : pending) {
    ImProcess& host = out.processes[p.process];
    PcBox box = DecideFtTiming(out, p.process, p.c, p.c + 1, p.index);
    for (auto& a : host.actions) {
      if (a.index == p.index) a.box = box;
    }
    for (const auto& cand : p.tmpl->candidates) {
      if (cand.pattern.kind != ActionKind::kSend) continue;
      Rational after = host.Next(p.index);
      auto it = std::find_if(out.messages.begin(), out.messages.end(), [&](const ImMessage& m) {
        return m.network == cand.pattern.network && m.index == cand.pattern.message_index;
      });
      if (it != out.messages.end()) {
        if (it->sender != p.process) {
          throw Error(ErrorCode::kDuplicateMessageIndex,
                      "message " + std::to_string(cand.pattern.message_index) +
                          " is sent by more than one process");
        }
        bool original = false;
        for (const auto& a : host.actions) {
          if (!a.inserted && a.candidates.front().pattern.kind == ActionKind::kSend &&
              a.candidates.front().pattern.network == it->network &&
              a.candidates.front().pattern.message_index == it->index) {
            original = true;
          }
        }
        if (original) {
          throw Error(ErrorCode::kDuplicateMessageIndex,
                      "FT message " + std::to_string(it->index) + " reuses an existing message index");
        }
        it->box[p.process].low = std::min(it->box[p.process].low, after);
        continue;
      }
      ImMessage msg;
      msg.network = cand.pattern.network;
      msg.index = cand.pattern.message_index;
      msg.sender = p.process;
      for (int m = 0; m < n_a; ++m) {
        msg.box.push_back({Rational(1), out.processes[m].Beyond()});
      }
      msg.box[p.process].low = after;
      out.messages.push_back(std::move(msg));
    }
  }
  return out;
}

}  // namespace ftsynth
