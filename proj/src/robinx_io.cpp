// Copyright 2026 The rrlab Authors
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

#include "rrlab/robinx_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "xml_dom.hpp"

namespace rrlab {

namespace {

using xml::Node;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(ParseErrorKind kind, int line, const std::string& what) {
  throw ParseError(kind, line, what);
}

long long to_integer(std::string_view text, int line, std::string_view what) {
  text = trim(text);
  long long v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    fail(ParseErrorKind::BadValue, line, std::string(what) + ": not an integer: '" +
                                             std::string(text) + "'");
  return v;
}

int to_int(std::string_view text, int line, std::string_view what) {
  const long long v = to_integer(text, line, what);
  if (v < -1000000000LL || v > 1000000000LL)
    fail(ParseErrorKind::BadValue, line, std::string(what) + ": value out of bounds");
  return static_cast<int>(v);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    const auto piece = trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

// Resource ids seen in <Teams> or <Slots>, mapped to dense indices.
struct IdMap {
  std::map<std::string, int, std::less<>> index;
  std::string_view what;

  int at(std::string_view id, int line) const {
    const auto it = index.find(trim(id));
    if (it == index.end())
      fail(ParseErrorKind::OutOfRange, line,
           "unknown " + std::string(what) + " '" + std::string(id) + "'");
    return it->second;
  }
  std::vector<int> set(std::string_view list, int line) const {
    std::vector<int> out;
    for (auto piece : split(list, ';')) out.push_back(at(piece, line));
    return out;
  }
};

// Attribute access that remembers which attributes were consumed.
class Attrs {
 public:
  explicit Attrs(const Node& node) : node_(node) {}

  const std::string* find(std::string_view key) {
    used_.insert(std::string(key));
    return node_.attribute(key);
  }
  std::string_view get(std::string_view key) {
    const std::string* v = find(key);
    if (v == nullptr)
      fail(ParseErrorKind::MissingField, node_.line,
           node_.name + " lacks attribute '" + std::string(key) + "'");
    return *v;
  }
  int integer(std::string_view key, int fallback) {
    const std::string* v = find(key);
    return v == nullptr ? fallback : to_int(*v, node_.line, key);
  }
  int line() const { return node_.line; }

  void warn_unused(std::vector<std::string>* warnings) const {
    if (warnings == nullptr) return;
    for (const auto& [k, v] : node_.attributes)
      if (!used_.count(k))
        warnings->push_back("line " + std::to_string(node_.line) + ": ignoring attribute '" + k +
                            "' of " + node_.name);
  }

 private:
  const Node& node_;
  std::set<std::string> used_;
};

VenueMode venue(std::string_view s, int line) {
  s = trim(s);
  if (s == "H") return VenueMode::Home;
  if (s == "A") return VenueMode::Away;
  if (s == "HA") return VenueMode::Any;
  fail(ParseErrorKind::BadValue, line, "venue mode must be H, A or HA, got '" + std::string(s) + "'");
}

Hardness hardness(std::string_view s, int line) {
  s = trim(s);
  if (s == "HARD") return Hardness::Hard;
  if (s == "SOFT") return Hardness::Soft;
  fail(ParseErrorKind::BadValue, line, "type must be HARD or SOFT, got '" + std::string(s) + "'");
}

void expect(Attrs& a, std::string_view key, std::initializer_list<std::string_view> allowed) {
  const std::string* v = a.find(key);
  if (v == nullptr) return;
  for (auto ok : allowed)
    if (trim(*v) == ok) return;
  fail(ParseErrorKind::BadValue, a.line(),
       "unsupported " + std::string(key) + "='" + *v + "'");
}

struct Resources {
  IdMap teams{{}, "team"};
  IdMap slots{{}, "slot"};
};

// One XML constraint element may name several teams where the model keeps one;
// such elements expand into one record per team.
std::vector<Constraint> read_constraint(const Node& node, const Resources& r,
                                        std::vector<std::string>* warnings) {
  Attrs a(node);
  const int line = node.line;
  const auto type = constraint_type_from_string(node.name);
  if (!type) fail(ParseErrorKind::UnknownConstraint, line, "unknown constraint <" + node.name + ">");

  Constraint proto;
  proto.hardness = hardness(a.get("type"), line);
  if (const std::string* p = a.find("penalty"))
    proto.penalty = to_int(*p, line, "penalty");
  else if (const std::string* c = a.find("cost"))
    proto.penalty = to_int(*c, line, "cost");
  else
    proto.penalty = proto.hard() ? 1 : 0;

  std::vector<Constraint> out;
  auto emit = [&](ConstraintParams params) {
    Constraint c = proto;
    c.params = std::move(params);
    out.push_back(std::move(c));
  };

  switch (*type) {
    case ConstraintType::CA1: {
      Ca1 p;
      p.slots = r.slots.set(a.get("slots"), line);
      p.mode = venue(a.get("mode"), line);
      p.min = a.integer("min", 0);
      p.max = a.integer("max", 0);
      for (int t : r.teams.set(a.get("teams"), line)) {
        p.team = t;
        emit(p);
      }
      break;
    }
    case ConstraintType::CA2: {
      Ca2 p;
      p.opponents = r.teams.set(a.get("teams2"), line);
      p.slots = r.slots.set(a.get("slots"), line);
      p.mode = venue(a.get("mode1"), line);
      expect(a, "mode2", {"GLOBAL"});
      p.min = a.integer("min", 0);
      p.max = a.integer("max", 0);
      for (int t : r.teams.set(a.get("teams1"), line)) {
        p.team = t;
        emit(p);
      }
      break;
    }
    case ConstraintType::CA3: {
      Ca3 p;
      p.opponents = r.teams.set(a.get("teams2"), line);
      p.mode = venue(a.get("mode1"), line);
      expect(a, "mode2", {"SLOTS"});
      p.min = a.integer("min", 0);
      p.max = a.integer("max", 0);
      p.window = to_int(a.get("intp"), line, "intp");
      for (int t : r.teams.set(a.get("teams1"), line)) {
        p.team = t;
        emit(p);
      }
      break;
    }
    case ConstraintType::CA4: {
      Ca4 p;
      p.teams1 = r.teams.set(a.get("teams1"), line);
      p.teams2 = r.teams.set(a.get("teams2"), line);
      p.slots = r.slots.set(a.get("slots"), line);
      p.mode = venue(a.get("mode1"), line);
      const auto scope = trim(a.get("mode2"));
      if (scope == "GLOBAL")
        p.scope = Ca4Scope::Global;
      else if (scope == "EVERY")
        p.scope = Ca4Scope::PerSlot;
      else
        fail(ParseErrorKind::BadValue, line, "CA4 mode2 must be GLOBAL or EVERY");
      p.min = a.integer("min", 0);
      p.max = a.integer("max", 0);
      emit(p);
      break;
    }
    case ConstraintType::GA1: {
      Ga1 p;
      for (auto meeting : split(a.get("meetings"), ';')) {
        const auto ends = split(meeting, ',');
        if (ends.size() != 2)
          fail(ParseErrorKind::BadValue, line, "meeting must be 'home,away': " + std::string(meeting));
        p.games.emplace_back(r.teams.at(ends[0], line), r.teams.at(ends[1], line));
      }
      p.slots = r.slots.set(a.get("slots"), line);
      p.min = a.integer("min", 0);
      p.max = a.integer("max", 0);
      emit(p);
      break;
    }
    case ConstraintType::BR1: {
      Br1 p;
      p.slots = r.slots.set(a.get("slots"), line);
      p.max_breaks = to_int(a.get("intp"), line, "intp");
      // Venue of the counted breaks: mode2 in the competition files, homeMode
      // in some derived ones.
      const std::string* m2 = a.find("mode2");
      const std::string* hm = a.find("homeMode");
      if (m2 != nullptr && trim(*m2) != "LEQ")
        p.mode = venue(*m2, line);
      else if (hm != nullptr)
        p.mode = venue(*hm, line);
      expect(a, "mode1", {"LEQ"});
      for (int t : r.teams.set(a.get("teams"), line)) {
        p.team = t;
        emit(p);
      }
      break;
    }
    case ConstraintType::BR2: {
      Br2 p;
      p.teams = r.teams.set(a.get("teams"), line);
      p.slots = r.slots.set(a.get("slots"), line);
      p.max_breaks = to_int(a.get("intp"), line, "intp");
      expect(a, "homeMode", {"HA"});
      expect(a, "mode2", {"LEQ"});
      emit(p);
      break;
    }
    case ConstraintType::FA2: {
      Fa2 p;
      p.teams = r.teams.set(a.get("teams"), line);
      p.slots = r.slots.set(a.get("slots"), line);
      p.bound = to_int(a.get("intp"), line, "intp");
      expect(a, "mode", {"H"});
      emit(p);
      break;
    }
    case ConstraintType::SE1: {
      Se1 p;
      p.teams = r.teams.set(a.get("teams"), line);
      p.min_separation = to_int(a.get("min"), line, "min");
      expect(a, "mode1", {"SLOTS"});
      emit(p);
      break;
    }
  }
  a.warn_unused(warnings);

  for (const Constraint& c : out) {
    Instance probe;
    probe.n_teams = static_cast<int>(r.teams.index.size());
    probe.constraints = {c};
    try {
      check_instance(probe);
    } catch (const InvalidInstance& e) {
      fail(ParseErrorKind::BadValue, line, e.what());
    }
  }
  return out;
}

IdMap read_ids(const Node* parent, std::string_view child, std::string_view what,
               std::vector<std::string>& names, bool& any_name) {
  IdMap ids{{}, what};
  if (parent == nullptr) return ids;
  for (const Node& n : parent->children) {
    if (n.name != child) continue;
    const std::string* id = n.attribute("id");
    if (id == nullptr)
      fail(ParseErrorKind::MissingField, n.line, std::string(what) + " without id");
    const int idx = static_cast<int>(ids.index.size());
    if (!ids.index.emplace(std::string(trim(*id)), idx).second)
      fail(ParseErrorKind::BadValue, n.line, "duplicate " + std::string(what) + " id '" + *id + "'");
    const std::string* name = n.attribute("name");
    any_name = any_name || name != nullptr;
    names.push_back(name != nullptr ? *name : std::string());
  }
  return ids;
}

bool is_constraint_group(std::string_view name) {
  return name.size() > 11 && name.substr(name.size() - 11) == "Constraints";
}

}  // namespace

Instance parse_instance(std::string_view text, std::vector<std::string>* warnings) {
  const Node root = xml::parse(text);
  if (root.name != "Instance")
    fail(ParseErrorKind::MalformedXml, root.line, "root element must be <Instance>");

  Instance inst;
  if (const Node* meta = root.child("MetaData"))
    if (const Node* name = meta->child("InstanceName")) inst.id = std::string(trim(name->text));

  if (const Node* structure = root.child("Structure")) {
    if (const Node* format = structure->child("Format")) {
      if (const Node* rr = format->child("numberRoundRobin"))
        if (to_int(rr->text, rr->line, "numberRoundRobin") != 2)
          fail(ParseErrorKind::BadValue, rr->line, "only double round robins are supported");
      if (const Node* c = format->child("compactness"))
        if (trim(c->text) != "C")
          fail(ParseErrorKind::BadValue, c->line, "only compact timetables are supported");
      if (const Node* mode = format->child("gameMode")) {
        const auto m = trim(mode->text);
        if (m == "P")
          inst.phased = true;
        else if (m != "NULL" && !m.empty())
          fail(ParseErrorKind::BadValue, mode->line, "gameMode must be P or NULL");
      }
    }
  }

  const Node* resources = root.child("Resources");
  if (resources == nullptr) fail(ParseErrorKind::MissingField, root.line, "missing <Resources>");
  const Node* teams = resources->child("Teams");
  if (teams == nullptr) fail(ParseErrorKind::MissingField, resources->line, "missing <Teams>");

  Resources r;
  bool team_named = false;
  bool slot_named = false;
  r.teams = read_ids(teams, "team", "team", inst.team_names, team_named);
  const Node* slots = resources->child("Slots");
  r.slots = read_ids(slots, "slot", "slot", inst.slot_names, slot_named);
  if (!team_named) inst.team_names.clear();
  if (!slot_named) inst.slot_names.clear();

  inst.n_teams = static_cast<int>(r.teams.index.size());
  if (inst.n_teams % 2 != 0)
    fail(ParseErrorKind::OddTeamCount, teams->line,
         "odd team count " + std::to_string(inst.n_teams));
  if (inst.n_teams < 2) fail(ParseErrorKind::BadValue, teams->line, "at least two teams needed");
  if (static_cast<int>(r.slots.index.size()) != inst.n_slots())
    fail(ParseErrorKind::BadValue, slots != nullptr ? slots->line : resources->line,
         "expected " + std::to_string(inst.n_slots()) + " slots, found " +
             std::to_string(r.slots.index.size()));

  if (const Node* constraints = root.child("Constraints")) {
    for (const Node& group : constraints->children) {
      if (!is_constraint_group(group.name))
        fail(ParseErrorKind::UnknownConstraint, group.line,
             "unknown constraint group <" + group.name + ">");
      for (const Node& c : group.children)
        for (Constraint& k : read_constraint(c, r, warnings)) inst.constraints.push_back(std::move(k));
    }
  }
  return inst;
}

namespace {

std::string group_of(ConstraintType t) {
  switch (t) {
    case ConstraintType::CA1:
    case ConstraintType::CA2:
    case ConstraintType::CA3:
    case ConstraintType::CA4: return "CapacityConstraints";
    case ConstraintType::GA1: return "GameConstraints";
    case ConstraintType::BR1:
    case ConstraintType::BR2: return "BreakConstraints";
    case ConstraintType::FA2: return "FairnessConstraints";
    case ConstraintType::SE1: return "SeparationConstraints";
  }
  return {};
}

std::string join(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

struct AttrWriter {
  std::string out;
  void add(std::string_view key, std::string_view value) {
    out += ' ';
    out += key;
    out += "=\"";
    out += xml::escape(value);
    out += '"';
  }
  void add(std::string_view key, int value) { add(key, std::to_string(value)); }
};

struct ConstraintWriter {
  AttrWriter& w;
  void operator()(const Ca1& p) {
    w.add("max", p.max);
    w.add("min", p.min);
    w.add("mode", to_string(p.mode));
    w.add("slots", join(p.slots));
    w.add("teams", std::to_string(p.team));
  }
  void operator()(const Ca2& p) {
    w.add("max", p.max);
    w.add("min", p.min);
    w.add("mode1", to_string(p.mode));
    w.add("mode2", "GLOBAL");
    w.add("slots", join(p.slots));
    w.add("teams1", std::to_string(p.team));
    w.add("teams2", join(p.opponents));
  }
  void operator()(const Ca3& p) {
    w.add("intp", p.window);
    w.add("max", p.max);
    w.add("min", p.min);
    w.add("mode1", to_string(p.mode));
    w.add("mode2", "SLOTS");
    w.add("teams1", std::to_string(p.team));
    w.add("teams2", join(p.opponents));
  }
  void operator()(const Ca4& p) {
    w.add("max", p.max);
    w.add("min", p.min);
    w.add("mode1", to_string(p.mode));
    w.add("mode2", p.scope == Ca4Scope::Global ? "GLOBAL" : "EVERY");
    w.add("slots", join(p.slots));
    w.add("teams1", join(p.teams1));
    w.add("teams2", join(p.teams2));
  }
  void operator()(const Ga1& p) {
    w.add("max", p.max);
    std::string meetings;
    for (const auto& [h, a] : p.games) meetings += std::to_string(h) + "," + std::to_string(a) + ";";
    w.add("meetings", meetings);
    w.add("min", p.min);
    w.add("slots", join(p.slots));
  }
  void operator()(const Br1& p) {
    w.add("intp", p.max_breaks);
    w.add("mode1", "LEQ");
    w.add("mode2", to_string(p.mode));
    w.add("slots", join(p.slots));
    w.add("teams", std::to_string(p.team));
  }
  void operator()(const Br2& p) {
    w.add("homeMode", "HA");
    w.add("intp", p.max_breaks);
    w.add("mode2", "LEQ");
    w.add("slots", join(p.slots));
    w.add("teams", join(p.teams));
  }
  void operator()(const Fa2& p) {
    w.add("intp", p.bound);
    w.add("mode", "H");
    w.add("slots", join(p.slots));
    w.add("teams", join(p.teams));
  }
  void operator()(const Se1& p) {
    w.add("min", p.min_separation);
    w.add("mode1", "SLOTS");
    w.add("teams", join(p.teams));
  }
};

}  // namespace

std::string write_instance(const Instance& inst) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<Instance>\n"
     << "  <MetaData>\n"
     << "    <InstanceName>" << xml::escape(inst.id) << "</InstanceName>\n"
     << "  </MetaData>\n"
     << "  <Structure>\n"
     << "    <Format leagueIds=\"0\">\n"
     << "      <numberRoundRobin>2</numberRoundRobin>\n"
     << "      <compactness>C</compactness>\n"
     << "      <gameMode>" << (inst.phased ? "P" : "NULL") << "</gameMode>\n"
     << "    </Format>\n"
     << "  </Structure>\n"
     << "  <ObjectiveFunction>\n"
     << "    <Objective>SC</Objective>\n"
     << "  </ObjectiveFunction>\n"
     << "  <Resources>\n"
     << "    <Leagues>\n"
     << "      <league id=\"0\" name=\"League0\"/>\n"
     << "    </Leagues>\n"
     << "    <Teams>\n";
  for (int t = 0; t < inst.n_teams; ++t) {
    os << "      <team id=\"" << t << "\" league=\"0\"";
    if (!inst.team_names.empty()) os << " name=\"" << xml::escape(inst.team_names[t]) << '"';
    os << "/>\n";
  }
  os << "    </Teams>\n"
     << "    <Slots>\n";
  for (int s = 0; s < inst.n_slots(); ++s) {
    os << "      <slot id=\"" << s << '"';
    if (!inst.slot_names.empty()) os << " name=\"" << xml::escape(inst.slot_names[s]) << '"';
    os << "/>\n";
  }
  os << "    </Slots>\n"
     << "  </Resources>\n"
     << "  <Constraints>\n";
  // Consecutive constraints of one group share an element, so the list order
  // survives a round trip.
  std::string open;
  for (const Constraint& c : inst.constraints) {
    const std::string group = group_of(c.type());
    if (group != open) {
      if (!open.empty()) os << "    </" << open << ">\n";
      os << "    <" << group << ">\n";
      open = group;
    }
    AttrWriter w;
    std::visit(ConstraintWriter{w}, c.params);
    w.add("penalty", c.penalty);
    w.add("type", c.hard() ? "HARD" : "SOFT");
    os << "      <" << to_string(c.type()) << w.out << "/>\n";
  }
  if (!open.empty()) os << "    </" << open << ">\n";
  os << "  </Constraints>\n"
     << "</Instance>\n";
  return os.str();
}

Timetable parse_solution(std::string_view text, const Instance& inst) {
  const Node root = xml::parse(text);
  if (root.name != "Solution")
    fail(ParseErrorKind::MalformedXml, root.line, "root element must be <Solution>");
  const Node* games = root.child("Games");
  if (games == nullptr) fail(ParseErrorKind::MissingField, root.line, "missing <Games>");

  Timetable tt(inst.n_teams);
  for (const Node& m : games->children) {
    if (m.name != "ScheduledMatch") continue;
    auto ref = [&](std::string_view key, int limit, std::string_view what) {
      const std::string* v = m.attribute(key);
      if (v == nullptr)
        fail(ParseErrorKind::MissingField, m.line, "ScheduledMatch lacks '" + std::string(key) + "'");
      const int x = to_int(*v, m.line, key);
      if (x < 0 || x >= limit)
        fail(ParseErrorKind::UnknownReference, m.line,
             "unknown " + std::string(what) + " " + std::to_string(x));
      return x;
    };
    const int h = ref("home", inst.n_teams, "team");
    const int a = ref("away", inst.n_teams, "team");
    const int s = ref("slot", inst.n_slots(), "slot");
    if (h == a) fail(ParseErrorKind::BadValue, m.line, "team plays itself");
    if (tt.scheduled(h, a))
      fail(ParseErrorKind::DuplicatePair, m.line,
           "pair (" + std::to_string(h) + "," + std::to_string(a) + ") listed twice");
    tt.set_slot(h, a, s);
  }
  return tt;
}

std::string write_solution(const Timetable& tt, const Instance& inst,
                           const EvaluationReport* report) {
  auto entries = tt.entries();
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
    return std::tie(x.slot, x.home, x.away) < std::tie(y.slot, y.home, y.away);
  });
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<Solution>\n"
     << "  <MetaData>\n"
     << "    <InstanceName>" << xml::escape(inst.id) << "</InstanceName>\n";
  if (report != nullptr)
    os << "    <ObjectiveValue infeasibility=\""
       << report->hard_violation + report->phased_violations << "\" objective=\""
       << report->objective << "\"/>\n";
  os << "  </MetaData>\n"
     << "  <Games>\n";
  for (const auto& e : entries)
    os << "    <ScheduledMatch home=\"" << e.home << "\" away=\"" << e.away << "\" slot=\""
       << e.slot << "\"/>\n";
  os << "  </Games>\n"
     << "</Solution>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Metadata CSV

namespace {

constexpr std::array<std::string_view, 6> kColumns = {
    "instance", "algorithm", "objective", "feasible", "wall_minutes", "cpu_minutes"};
constexpr std::string_view kFeaturePrefix = "feature_";

// Splits one CSV record; double quotes protect commas and "" is a quote.
std::vector<std::string> csv_fields(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double to_real(std::string_view text, int line, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    fail(ParseErrorKind::BadValue, line,
         std::string(what) + ": not a number: '" + std::string(text) + "'");
  return v;
}

bool to_flag(std::string_view s, int line) {
  s = trim(s);
  if (s == "feasible" || s == "true" || s == "1") return true;
  if (s == "infeasible" || s == "false" || s == "0") return false;
  fail(ParseErrorKind::BadValue, line, "feasible must be feasible/infeasible, got '" +
                                           std::string(s) + "'");
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

MetadataTable parse_metadata(std::string_view csv) {
  const auto lines = split_lines(csv);
  std::size_t header_at = 0;
  while (header_at < lines.size() && trim(lines[header_at]).empty()) ++header_at;
  if (header_at == lines.size()) fail(ParseErrorKind::MissingField, 1, "missing header row");

  const auto header = csv_fields(lines[header_at]);
  std::array<int, kColumns.size()> col{};
  col.fill(-1);
  std::vector<std::pair<int, std::string>> feature_cols;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    const auto name = std::string(trim(header[i]));
    const auto known = std::find(kColumns.begin(), kColumns.end(), name);
    if (known != kColumns.end()) {
      col[known - kColumns.begin()] = i;
    } else if (name.rfind(kFeaturePrefix, 0) == 0 && name.size() > kFeaturePrefix.size()) {
      feature_cols.emplace_back(i, name.substr(kFeaturePrefix.size()));
    } else {
      fail(ParseErrorKind::UnknownColumn, static_cast<int>(header_at) + 1,
           "unknown column '" + name + "'");
    }
  }
  for (std::size_t k = 0; k < kColumns.size(); ++k)
    if (col[k] < 0)
      fail(ParseErrorKind::MissingField, static_cast<int>(header_at) + 1,
           "missing column '" + std::string(kColumns[k]) + "'");

  MetadataTable table;
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, std::size_t> feature_row_of;
  for (std::size_t li = header_at + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const int line = static_cast<int>(li) + 1;
    const auto f = csv_fields(lines[li]);
    if (f.size() != header.size())
      fail(ParseErrorKind::BadValue, line,
           "expected " + std::to_string(header.size()) + " fields, found " +
               std::to_string(f.size()));
    PerformanceRecord r;
    r.instance_id = std::string(trim(f[col[0]]));
    r.algorithm = std::string(trim(f[col[1]]));
    const auto obj = trim(f[col[2]]);
    const bool flag = to_flag(f[col[3]], line);
    if (obj != kNoSolution) {
      const long long v = to_integer(obj, line, "objective");
      if (v < 0) fail(ParseErrorKind::NegativeObjective, line, "negative objective");
      // The objective of an infeasible submission is not comparable; it is
      // recorded as no solution.
      if (flag) r.objective = v;
    }
    r.feasible = r.objective.has_value();
    r.wall_minutes = to_real(f[col[4]], line, "wall_minutes");
    r.cpu_minutes = to_real(f[col[5]], line, "cpu_minutes");
    r.clock_ratio = clock_speed_ratio(r.algorithm);
    if (!seen.emplace(r.instance_id, r.algorithm).second)
      fail(ParseErrorKind::DuplicatePair, line,
           "duplicate row for (" + r.instance_id + ", " + r.algorithm + ")");

    if (!feature_cols.empty()) {
      auto [it, fresh] = feature_row_of.emplace(r.instance_id, table.feature_rows.size());
      if (fresh) table.feature_rows.emplace_back(r.instance_id, FeatureVector{});
      FeatureVector& fv = table.feature_rows[it->second].second;
      for (const auto& [i, name] : feature_cols) {
        const auto cell = trim(f[i]);
        if (cell.empty()) continue;
        const double v = to_real(cell, line, name);
        const auto [pos, inserted] = fv.emplace(name, v);
        if (!inserted && pos->second != v)
          fail(ParseErrorKind::BadValue, line,
               "conflicting values of feature '" + name + "' for " + r.instance_id);
      }
    }
    table.rows.push_back(std::move(r));
  }
  // Instances without any feature value carry no feature row.
  std::erase_if(table.feature_rows, [](const auto& row) { return row.second.empty(); });
  return table;
}

std::string write_metadata(const MetadataTable& table) {
  std::set<std::string> names;
  std::map<std::string, const FeatureVector*> features;
  for (const auto& [id, fv] : table.feature_rows) {
    features[id] = &fv;
    for (const auto& [name, v] : fv) names.insert(name);
  }
  std::string out;
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    if (k) out += ',';
    out += kColumns[k];
  }
  for (const auto& name : names) out += "," + csv_quote(std::string(kFeaturePrefix) + name);
  out += '\n';
  for (const PerformanceRecord& r : table.rows) {
    out += csv_quote(r.instance_id) + ',' + csv_quote(r.algorithm) + ',';
    out += r.objective ? std::to_string(*r.objective) : std::string(kNoSolution);
    out += r.feasible && r.objective ? ",feasible," : ",infeasible,";
    out += format_real(r.wall_minutes) + ',' + format_real(r.cpu_minutes);
    const auto it = features.find(r.instance_id);
    for (const auto& name : names) {
      out += ',';
      if (it == features.end()) continue;
      const auto v = it->second->find(name);
      if (v != it->second->end()) out += format_real(v->second);
    }
    out += '\n';
  }
  return out;
}

std::vector<CoordinateRow> parse_coordinates(std::string_view csv) {
  const auto lines = split_lines(csv);
  std::size_t at = 0;
  while (at < lines.size() && trim(lines[at]).empty()) ++at;
  if (at == lines.size()) fail(ParseErrorKind::MissingField, 1, "missing header row");
  const auto header = csv_fields(lines[at]);
  int col[3] = {-1, -1, -1};
  const std::string_view names[3] = {"instance", "z1", "z2"};
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    const auto name = trim(header[i]);
    const auto it = std::find(std::begin(names), std::end(names), name);
    if (it == std::end(names))
      fail(ParseErrorKind::UnknownColumn, static_cast<int>(at) + 1,
           "unknown column '" + std::string(name) + "'");
    col[it - std::begin(names)] = i;
  }
  for (int k = 0; k < 3; ++k)
    if (col[k] < 0)
      fail(ParseErrorKind::MissingField, static_cast<int>(at) + 1,
           "missing column '" + std::string(names[k]) + "'");
  std::vector<CoordinateRow> rows;
  std::set<std::string> seen;
  for (std::size_t li = at + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const int line = static_cast<int>(li) + 1;
    const auto f = csv_fields(lines[li]);
    if (f.size() != header.size()) fail(ParseErrorKind::BadValue, line, "wrong number of fields");
    CoordinateRow r{std::string(trim(f[col[0]])), to_real(f[col[1]], line, "z1"),
                    to_real(f[col[2]], line, "z2")};
    if (!seen.insert(r.instance).second)
      fail(ParseErrorKind::DuplicatePair, line, "instance '" + r.instance + "' listed twice");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string write_coordinates(const std::vector<CoordinateRow>& rows) {
  std::string out = "instance,z1,z2\n";
  for (const auto& r : rows)
    out += csv_quote(r.instance) + ',' + format_real(r.z1) + ',' + format_real(r.z2) + '\n';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace rrlab
