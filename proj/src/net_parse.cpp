#include "revelio/net_parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace revelio {

namespace {

std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

void add_sorted(std::vector<std::uint32_t>& v, std::uint32_t x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

}  // namespace

InputFormat detect_format(std::string_view text) {
  auto eol = text.find('\n');
  std::string_view first = text.substr(0, eol);
  while (!first.empty() && (first.back() == '\r' || first.back() == ' '))
    first.remove_suffix(1);
  if (first == "PEP") return InputFormat::llnet;
  if (first.substr(0, 4) == "net ") return InputFormat::canonical;
  if (first.substr(0, 8) == "# prefix") return InputFormat::prefix_dump;
  throw ParseError(1, "unrecognized input format");
}

PetriNet parse_canonical(const std::string& text) {
  PetriNet net;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_header = false;

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto toks = split_ws(line);

    if (!saw_header) {
      if (toks[0] != "net" || toks.size() != 2)
        throw ParseError(lineno, "expected 'net <name>' header");
      net.name = toks[1];
      saw_header = true;
      continue;
    }
    if (toks[0] == "place") {
      if (toks.size() < 2 || toks.size() > 3)
        throw ParseError(lineno, "expected 'place <name> [*]'");
      if (net.place_id(toks[1]) || net.transition_id(toks[1]))
        throw ParseError(lineno, "duplicate name: " + toks[1]);
      auto id = net.add_place(toks[1]);
      if (toks.size() == 3) {
        if (toks[2] != "*") throw ParseError(lineno, "expected '*' marker");
        net.initial_marking.add(id);
      }
    } else if (toks[0] == "trans") {
      if (toks.size() != 2) throw ParseError(lineno, "expected 'trans <name>'");
      if (net.place_id(toks[1]) || net.transition_id(toks[1]))
        throw ParseError(lineno, "duplicate name: " + toks[1]);
      net.add_transition(toks[1]);
    } else if (toks[0] == "arc") {
      if (toks.size() != 4 || toks[2] != "->")
        throw ParseError(lineno, "expected 'arc <a> -> <b>'");
      auto pa = net.place_id(toks[1]);
      auto ta = net.transition_id(toks[1]);
      auto pb = net.place_id(toks[3]);
      auto tb = net.transition_id(toks[3]);
      if (pa && tb) {
        add_sorted(net.transitions[*tb].pre, *pa);
      } else if (ta && pb) {
        add_sorted(net.transitions[*ta].post, *pb);
      } else if (!pa && !ta) {
        throw ParseError(lineno, "arc references undeclared node: " + toks[1]);
      } else if (!pb && !tb) {
        throw ParseError(lineno, "arc references undeclared node: " + toks[3]);
      } else {
        throw ParseError(lineno, "arc must connect a place and a transition");
      }
    } else {
      throw ParseError(lineno, "unknown directive: " + toks[0]);
    }
  }
  if (!saw_header) throw ParseError(lineno ? lineno : 1, "missing 'net' header");
  try {
    validate(net);
  } catch (const NetError& e) {
    throw ParseError(lineno, e.what());
  }
  return net;
}

std::string serialize_canonical(const PetriNet& net) {
  std::ostringstream out;
  out << "net " << net.name << "\n";
  for (std::uint32_t p = 0; p < net.places.size(); ++p) {
    out << "place " << net.places[p].name;
    if (net.initial_marking.contains(p)) out << " *";
    out << "\n";
  }
  for (const auto& t : net.transitions) out << "trans " << t.name << "\n";
  for (const auto& t : net.transitions) {
    for (auto p : t.pre)
      out << "arc " << net.places[p].name << " -> " << t.name << "\n";
    for (auto p : t.post)
      out << "arc " << t.name << " -> " << net.places[p].name << "\n";
  }
  return out.str();
}

namespace {

// Parses a PL/TR entry "<id>"<name>"<suffix>"; returns (id, name, marking)
// where marking comes from an M<n> token in the suffix. Skippable suffix
// tokens: <x>@<y> coordinates, M<n>, m<n>, k<n>.
struct Entry {
  long id;
  std::string name;
  long marking = 0;
};

Entry parse_entry(const std::string& line, int lineno) {
  Entry e;
  std::size_t i = 0;
  if (i >= line.size() || !std::isdigit(static_cast<unsigned char>(line[i])))
    throw ParseError(lineno, "malformed entry: expected numeric id");
  e.id = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
    e.id = e.id * 10 + (line[i++] - '0');
  if (i >= line.size() || line[i] != '"')
    throw ParseError(lineno, "malformed entry: expected quoted name");
  ++i;
  auto close = line.find('"', i);
  if (close == std::string::npos)
    throw ParseError(lineno, "malformed entry: unterminated name");
  e.name = line.substr(i, close - i);
  i = close + 1;
  while (i < line.size()) {
    char c = line[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      // coordinate pair x@y
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j >= line.size() || line[j] != '@')
        throw ParseError(lineno, "unsupported entry annotation");
      ++j;
      if (j >= line.size() || !std::isdigit(static_cast<unsigned char>(line[j])))
        throw ParseError(lineno, "unsupported entry annotation");
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      i = j;
    } else if (c == 'M' || c == 'm' || c == 'k') {
      std::size_t j = i + 1;
      long val = 0;
      if (j >= line.size() || !std::isdigit(static_cast<unsigned char>(line[j])))
        throw ParseError(lineno, "unsupported entry annotation");
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j])))
        val = val * 10 + (line[j++] - '0');
      if (c == 'M') e.marking = val;
      i = j;
    } else {
      throw ParseError(lineno, "unsupported entry annotation");
    }
  }
  return e;
}

}  // namespace

PetriNet parse_llnet(const std::string& text) {
  PetriNet net;
  net.name = "llnet";
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;

  enum class Section { header, pl, tr, tp, pt } section = Section::header;
  int header_lines = 0;
  std::unordered_map<long, std::uint32_t> place_of, trans_of;

  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (section == Section::header) {
      if (header_lines == 0 && line != "PEP")
        throw ParseError(lineno, "expected PEP header");
      if (header_lines == 1 && line != "PetriBox" && line != "PTNet")
        throw ParseError(lineno, "expected PetriBox or PTNet");
      if (header_lines == 2 && line.substr(0, 9) != "FORMAT_N2")
        throw ParseError(lineno, "expected FORMAT_N2");
      if (++header_lines == 3) section = Section::pl;  // await PL
      continue;
    }
    if (line == "PL") { section = Section::pl; continue; }
    if (line == "TR") { section = Section::tr; continue; }
    if (line == "TP") { section = Section::tp; continue; }
    if (line == "PT") { section = Section::pt; continue; }
    if (std::isalpha(static_cast<unsigned char>(line[0])) &&
        line.find('"') == std::string::npos)
      throw ParseError(lineno, "unsupported section: " + line);

    switch (section) {
      case Section::pl: {
        Entry e = parse_entry(line, lineno);
        if (e.marking > 1)
          throw ParseError(lineno, "marking exceeds 1; only safe nets supported");
        if (net.place_id(e.name))
          throw ParseError(lineno, "duplicate name: " + e.name);
        auto id = net.add_place(e.name);
        place_of[e.id] = id;
        if (e.marking == 1) net.initial_marking.add(id);
        break;
      }
      case Section::tr: {
        Entry e = parse_entry(line, lineno);
        if (net.transition_id(e.name) || net.place_id(e.name))
          throw ParseError(lineno, "duplicate name: " + e.name);
        trans_of[e.id] = net.add_transition(e.name);
        break;
      }
      case Section::tp:
      case Section::pt: {
        char sep = section == Section::tp ? '<' : '>';
        auto pos = line.find(sep);
        if (pos == std::string::npos)
          throw ParseError(lineno, "malformed arc entry");
        long a, b;
        try {
          a = std::stol(line.substr(0, pos));
          b = std::stol(line.substr(pos + 1));
        } catch (...) {
          throw ParseError(lineno, "malformed arc entry");
        }
        if (section == Section::tp) {
          auto t = trans_of.find(a);
          auto p = place_of.find(b);
          if (t == trans_of.end() || p == place_of.end())
            throw ParseError(lineno, "arc references undeclared node");
          add_sorted(net.transitions[t->second].post, p->second);
        } else {
          auto p = place_of.find(a);
          auto t = trans_of.find(b);
          if (t == trans_of.end() || p == place_of.end())
            throw ParseError(lineno, "arc references undeclared node");
          add_sorted(net.transitions[t->second].pre, p->second);
        }
        break;
      }
      default:
        throw ParseError(lineno, "entry outside any section");
    }
  }
  try {
    validate(net);
  } catch (const NetError& e) {
    throw ParseError(lineno, e.what());
  }
  return net;
}

}  // namespace revelio
