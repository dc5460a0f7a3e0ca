#include "adiasim/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace adiasim {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// Shortest decimal form that round-trips through parse.
std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Token {
  std::string_view text;
  int column; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '*') break; // comment to end of line
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '*')
      ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

// Numeric literal with optional SPICE-style magnitude suffix
// (f, p, n, u, m, k, meg). Throws InvalidValue on anything else.
double parse_value(std::string_view text, int line, int column) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double value = 0.0;
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr == begin) {
    throw SimError(ErrorKind::InvalidValue, "expected a number, got '" +
                   std::string(text) + "'", line, column);
  }
  std::string_view suffix(res.ptr, static_cast<std::size_t>(end - res.ptr));
  double scale = 1.0;
  if (!suffix.empty()) {
    if (iequals(suffix, "meg")) scale = 1e6;
    else if (iequals(suffix, "f")) scale = 1e-15;
    else if (iequals(suffix, "p")) scale = 1e-12;
    else if (iequals(suffix, "n")) scale = 1e-9;
    else if (iequals(suffix, "u")) scale = 1e-6;
    else if (iequals(suffix, "m")) scale = 1e-3;
    else if (iequals(suffix, "k")) scale = 1e3;
    else
      throw SimError(ErrorKind::InvalidValue,
                     "unknown magnitude suffix '" + std::string(suffix) + "'",
                     line, column);
  }
  return value * scale;
}

// KEY=value split; returns the value part of e.g. "R=10k" if the key matches.
std::optional<std::string_view> key_value(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1) return std::nullopt;
  if (!iequals(token.substr(0, key.size()), key)) return std::nullopt;
  if (token[key.size()] != '=') return std::nullopt;
  return token.substr(key.size() + 1);
}

NodeRole parse_role(std::string_view text, int line, int column) {
  if (iequals(text, "IN")) return NodeRole::Input;
  if (iequals(text, "OUT")) return NodeRole::Output;
  if (iequals(text, "VDD")) return NodeRole::SupplyRail;
  if (iequals(text, "GND")) return NodeRole::GroundRail;
  if (iequals(text, "PCLK")) return NodeRole::PowerClock;
  throw SimError(ErrorKind::InvalidValue,
                 "unknown role '" + std::string(text) + "'", line, column);
}

} // namespace

const char* node_role_name(NodeRole role) {
  switch (role) {
    case NodeRole::Internal: return "internal";
    case NodeRole::Input: return "input";
    case NodeRole::Output: return "output";
    case NodeRole::SupplyRail: return "vdd";
    case NodeRole::GroundRail: return "gnd";
    case NodeRole::PowerClock: return "pclk";
  }
  return "?";
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::DuplicateName: return "duplicate name";
    case ErrorKind::UnknownNode: return "unknown node";
    case ErrorKind::MissingRail: return "missing rail";
    case ErrorKind::InvalidValue: return "invalid value";
    case ErrorKind::MissingInput: return "missing input";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::ZeroCapacitance: return "zero capacitance";
    case ErrorKind::SingularSystem: return "singular system";
  }
  return "?";
}

std::string SimError::format(ErrorKind kind, const std::string& message,
                             int line, int column) {
  std::ostringstream out;
  out << error_kind_name(kind);
  if (line > 0) {
    out << " at line " << line;
    if (column > 0) out << ", column " << column;
  }
  out << ": " << message;
  return out.str();
}

NodeId Netlist::add_node(std::string name, double capacitance, NodeRole role) {
  if (!is_ident(name))
    throw SimError(ErrorKind::InvalidValue, "bad node name '" + name + "'");
  if (!(capacitance >= 0.0) || !std::isfinite(capacitance))
    throw SimError(ErrorKind::InvalidValue,
                   "negative capacitance on node '" + name + "'");
  std::string key = ascii_lower(name);
  if (node_index_.count(key))
    throw SimError(ErrorKind::DuplicateName, "node '" + name + "'");
  NodeId id(static_cast<std::uint32_t>(nodes_.size()));
  nodes_.push_back(Node{std::move(name), capacitance, role});
  node_index_.emplace(std::move(key), id.index);
  return id;
}

void Netlist::add_device(std::string name, DeviceKind kind, NodeId gate,
                         NodeId source, NodeId drain, double on_resistance) {
  if (name.empty() || (name[0] != 'M' && name[0] != 'm'))
    throw SimError(ErrorKind::InvalidValue,
                   "device name '" + name + "' must start with 'M'");
  auto in_range = [this](NodeId id) { return id.index < nodes_.size(); };
  if (!in_range(gate) || !in_range(source) || !in_range(drain))
    throw SimError(ErrorKind::UnknownNode,
                   "device '" + name + "' references an undeclared node");
  if (source == drain)
    throw SimError(ErrorKind::InvalidValue,
                   "device '" + name + "' is self-shorted (source == drain)");
  if (!(on_resistance > 0.0) || !std::isfinite(on_resistance))
    throw SimError(ErrorKind::InvalidValue,
                   "device '" + name + "' needs a positive finite on-resistance");
  std::string key = ascii_lower(name);
  if (device_index_.count(key))
    throw SimError(ErrorKind::DuplicateName, "device '" + name + "'");
  device_index_.emplace(std::move(key),
                        static_cast<std::uint32_t>(devices_.size()));
  devices_.push_back(Device{std::move(name), kind, gate, source, drain, on_resistance});
}

void Netlist::add_input(NodeId id) {
  Node& n = node(id);
  if (n.role != NodeRole::Internal && n.role != NodeRole::Input)
    throw SimError(ErrorKind::InvalidValue,
                   "node '" + n.name + "' has role " + node_role_name(n.role) +
                   " and cannot be an input pin");
  n.role = NodeRole::Input;
  if (std::find(inputs_.begin(), inputs_.end(), id) == inputs_.end())
    inputs_.push_back(id);
}

void Netlist::add_output(NodeId id) {
  Node& n = node(id);
  if (n.role != NodeRole::Internal && n.role != NodeRole::Output)
    throw SimError(ErrorKind::InvalidValue,
                   "node '" + n.name + "' has role " + node_role_name(n.role) +
                   " and cannot be an output pin");
  n.role = NodeRole::Output;
  if (std::find(outputs_.begin(), outputs_.end(), id) == outputs_.end())
    outputs_.push_back(id);
}

std::optional<NodeId> Netlist::find_node(std::string_view name) const {
  auto it = node_index_.find(ascii_lower(name));
  if (it == node_index_.end()) return std::nullopt;
  return NodeId(it->second);
}

std::optional<std::uint32_t> Netlist::find_device(std::string_view name) const {
  auto it = device_index_.find(ascii_lower(name));
  if (it == device_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Netlist::nodes_with_role(NodeRole role) const {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].role == role) out.push_back(NodeId(i));
  return out;
}

std::optional<NodeId> Netlist::ground() const {
  auto g = nodes_with_role(NodeRole::GroundRail);
  if (g.size() == 1) return g.front();
  return std::nullopt;
}

bool Netlist::has_power_clock() const {
  return !nodes_with_role(NodeRole::PowerClock).empty();
}

Netlist parse_netlist(std::string_view text) {
  Netlist netlist;

  struct PendingDevice {
    std::string name;
    DeviceKind kind;
    std::string gate, source, drain;
    std::optional<double> resistance;
    int line;
    int column; // of the first terminal token
  };
  struct PendingPin {
    std::string name;
    bool is_input;
    int line, column;
  };

  std::vector<PendingDevice> pending_devices;
  std::vector<PendingPin> pending_pins;
  std::optional<double> default_r;
  bool saw_name = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const Token& head = tokens.front();

    if (head.text[0] == '.') {
      std::string_view directive = head.text;
      if (iequals(directive, ".NAME")) {
        if (tokens.size() != 2 || !is_ident(tokens[1].text))
          throw SimError(ErrorKind::Syntax, ".NAME expects one identifier",
                         line_no, head.column);
        if (saw_name)
          throw SimError(ErrorKind::Syntax, "duplicate .NAME", line_no, head.column);
        saw_name = true;
        netlist.set_name(std::string(tokens[1].text));
      } else if (iequals(directive, ".NODE")) {
        if (tokens.size() < 2 || !is_ident(tokens[1].text))
          throw SimError(ErrorKind::Syntax, ".NODE expects a node name",
                         line_no, head.column);
        double cap = 0.0;
        NodeRole role = NodeRole::Internal;
        for (std::size_t i = 2; i < tokens.size(); ++i) {
          if (auto v = key_value(tokens[i].text, "C")) {
            cap = parse_value(*v, line_no, tokens[i].column);
            if (cap < 0.0)
              throw SimError(ErrorKind::InvalidValue, "negative capacitance",
                             line_no, tokens[i].column);
          } else if (auto r = key_value(tokens[i].text, "ROLE")) {
            role = parse_role(*r, line_no, tokens[i].column);
          } else {
            throw SimError(ErrorKind::Syntax, "unexpected token '" +
                           std::string(tokens[i].text) + "' on .NODE line",
                           line_no, tokens[i].column);
          }
        }
        try {
          netlist.add_node(std::string(tokens[1].text), cap, role);
        } catch (const SimError& e) {
          throw SimError(e.kind(), e.what(), line_no, tokens[1].column);
        }
      } else if (iequals(directive, ".INPUTS") || iequals(directive, ".OUTPUTS")) {
        bool is_input = iequals(directive, ".INPUTS");
        if (tokens.size() < 2)
          throw SimError(ErrorKind::Syntax,
                         std::string(directive) + " expects at least one node",
                         line_no, head.column);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          if (!is_ident(tokens[i].text))
            throw SimError(ErrorKind::Syntax, "bad pin name '" +
                           std::string(tokens[i].text) + "'", line_no,
                           tokens[i].column);
          pending_pins.push_back({std::string(tokens[i].text), is_input,
                                  line_no, tokens[i].column});
        }
      } else if (iequals(directive, ".DEFAULT")) {
        if (tokens.size() != 2)
          throw SimError(ErrorKind::Syntax, ".DEFAULT expects R=<val>",
                         line_no, head.column);
        auto v = key_value(tokens[1].text, "R");
        if (!v)
          throw SimError(ErrorKind::Syntax, ".DEFAULT expects R=<val>",
                         line_no, tokens[1].column);
        double r = parse_value(*v, line_no, tokens[1].column);
        if (!(r > 0.0) || !std::isfinite(r))
          throw SimError(ErrorKind::InvalidValue,
                         "default on-resistance must be positive", line_no,
                         tokens[1].column);
        default_r = r;
      } else {
        throw SimError(ErrorKind::Syntax, "unknown directive '" +
                       std::string(directive) + "'", line_no, head.column);
      }
      continue;
    }

    if (head.text[0] == 'M' || head.text[0] == 'm') {
      if (!is_ident(head.text) || head.text.size() < 2)
        throw SimError(ErrorKind::Syntax, "bad device name '" +
                       std::string(head.text) + "'", line_no, head.column);
      // Split off R=<val>, keep the positional tokens.
      std::optional<double> r;
      std::vector<Token> positional;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (auto v = key_value(tokens[i].text, "R")) {
          if (r)
            throw SimError(ErrorKind::Syntax, "duplicate R= on device line",
                           line_no, tokens[i].column);
          r = parse_value(*v, line_no, tokens[i].column);
        } else {
          positional.push_back(tokens[i]);
        }
      }
      // drain gate source [bulk] type — the last positional token is N or P.
      if (positional.size() != 4 && positional.size() != 5)
        throw SimError(ErrorKind::Syntax,
                       "device line expects <drain> <gate> <source> [<bulk>] "
                       "<N|P> [R=<val>]",
                       line_no, head.column);
      const Token& type_tok = positional.back();
      DeviceKind kind;
      if (iequals(type_tok.text, "N")) kind = DeviceKind::NMos;
      else if (iequals(type_tok.text, "P")) kind = DeviceKind::PMos;
      else
        throw SimError(ErrorKind::Syntax, "device type must be N or P, got '" +
                       std::string(type_tok.text) + "'", line_no, type_tok.column);
      for (std::size_t i = 0; i + 1 < positional.size(); ++i) {
        if (!is_ident(positional[i].text))
          throw SimError(ErrorKind::Syntax, "bad node name '" +
                         std::string(positional[i].text) + "'", line_no,
                         positional[i].column);
      }
      // A 5-token form carries a bulk terminal; it is accepted and discarded.
      pending_devices.push_back({std::string(head.text), kind,
                                 std::string(positional[1].text),
                                 std::string(positional[2].text),
                                 std::string(positional[0].text),
                                 r, line_no, positional[0].column});
      continue;
    }

    throw SimError(ErrorKind::Syntax, "unrecognized statement '" +
                   std::string(head.text) + "'", line_no, head.column);
  }

  // Terminal and pin references resolve once every .NODE has been seen, so
  // declaration order in the file does not matter.
  auto resolve = [&netlist](const std::string& name, int line, int column) {
    auto id = netlist.find_node(name);
    if (!id)
      throw SimError(ErrorKind::UnknownNode, "'" + name + "'", line, column);
    return *id;
  };

  for (const auto& p : pending_devices) {
    NodeId gate = resolve(p.gate, p.line, p.column);
    NodeId source = resolve(p.source, p.line, p.column);
    NodeId drain = resolve(p.drain, p.line, p.column);
    double r = p.resistance.value_or(default_r.value_or(kDefaultOnResistance));
    try {
      netlist.add_device(p.name, p.kind, gate, source, drain, r);
    } catch (const SimError& e) {
      throw SimError(e.kind(), e.what(), p.line, p.column);
    }
  }
  for (const auto& p : pending_pins) {
    NodeId id = resolve(p.name, p.line, p.column);
    try {
      if (p.is_input) netlist.add_input(id);
      else netlist.add_output(id);
    } catch (const SimError& e) {
      throw SimError(e.kind(), e.what(), p.line, p.column);
    }
  }

  auto grounds = netlist.nodes_with_role(NodeRole::GroundRail);
  if (grounds.empty())
    throw SimError(ErrorKind::MissingRail, "netlist declares no GND node",
                   line_no);
  if (grounds.size() > 1)
    throw SimError(ErrorKind::MissingRail, "netlist declares " +
                   std::to_string(grounds.size()) + " GND nodes", line_no);
  if (netlist.nodes_with_role(NodeRole::SupplyRail).empty() &&
      !netlist.has_power_clock())
    throw SimError(ErrorKind::MissingRail,
                   "netlist declares neither VDD nor PCLK", line_no);

  return netlist;
}

std::string serialize_netlist(const Netlist& netlist) {
  std::ostringstream out;
  if (!netlist.name().empty()) out << ".NAME " << netlist.name() << "\n";
  for (const Node& n : netlist.nodes()) {
    out << ".NODE " << n.name;
    if (n.capacitance != 0.0) out << " C=" << format_double(n.capacitance);
    switch (n.role) {
      case NodeRole::Internal: break;
      case NodeRole::Input: out << " ROLE=IN"; break;
      case NodeRole::Output: out << " ROLE=OUT"; break;
      case NodeRole::SupplyRail: out << " ROLE=VDD"; break;
      case NodeRole::GroundRail: out << " ROLE=GND"; break;
      case NodeRole::PowerClock: out << " ROLE=PCLK"; break;
    }
    out << "\n";
  }
  for (const Device& d : netlist.devices()) {
    out << d.name << " " << netlist.node(d.drain).name << " "
        << netlist.node(d.gate).name << " " << netlist.node(d.source).name
        << " " << (d.kind == DeviceKind::NMos ? "N" : "P")
        << " R=" << format_double(d.on_resistance) << "\n";
  }
  auto pin_line = [&](const char* directive, const std::vector<NodeId>& pins) {
    if (pins.empty()) return;
    out << directive;
    for (NodeId id : pins) out << " " << netlist.node(id).name;
    out << "\n";
  };
  pin_line(".INPUTS", netlist.inputs());
  pin_line(".OUTPUTS", netlist.outputs());
  return out.str();
}

const char* diagnostic_code_name(Diagnostic::Code code) {
  switch (code) {
    case Diagnostic::Code::NoDevices: return "NoDevices";
    case Diagnostic::Code::FloatingNode: return "FloatingNode";
    case Diagnostic::Code::ZeroLoadCapacitance: return "ZeroLoadCapacitance";
    case Diagnostic::Code::MissingGroundRail: return "MissingGroundRail";
    case Diagnostic::Code::MultipleGroundRails: return "MultipleGroundRails";
    case Diagnostic::Code::MissingSupply: return "MissingSupply";
    case Diagnostic::Code::UnlistedPin: return "UnlistedPin";
    case Diagnostic::Code::InvalidResistance: return "InvalidResistance";
    case Diagnostic::Code::SelfShortedDevice: return "SelfShortedDevice";
    case Diagnostic::Code::DanglingTerminal: return "DanglingTerminal";
  }
  return "?";
}

std::vector<Diagnostic> validate(const Netlist& netlist) {
  std::vector<Diagnostic> out;
  auto report = [&out](Diagnostic::Code code, std::string element,
                       std::string message) {
    out.push_back({code, std::move(element), std::move(message)});
  };

  if (netlist.device_count() == 0)
    report(Diagnostic::Code::NoDevices, netlist.name(),
           "netlist has no devices and cannot be simulated");

  std::vector<bool> touched(netlist.node_count(), false);
  for (const Device& d : netlist.devices()) {
    bool ok = true;
    for (NodeId t : {d.gate, d.source, d.drain}) {
      if (t.index >= netlist.node_count()) {
        report(Diagnostic::Code::DanglingTerminal, d.name,
               "terminal index out of range");
        ok = false;
      }
    }
    if (!ok) continue;
    touched[d.gate.index] = true;
    touched[d.source.index] = true;
    touched[d.drain.index] = true;
    if (d.source == d.drain)
      report(Diagnostic::Code::SelfShortedDevice, d.name,
             "source and drain are the same node");
    if (!(d.on_resistance > 0.0) || !std::isfinite(d.on_resistance))
      report(Diagnostic::Code::InvalidResistance, d.name,
             "on-resistance must be positive and finite");
  }

  std::size_t grounds = 0, supplies = 0;
  for (std::uint32_t i = 0; i < netlist.node_count(); ++i) {
    const Node& n = netlist.node(NodeId(i));
    switch (n.role) {
      case NodeRole::GroundRail: ++grounds; break;
      case NodeRole::SupplyRail:
      case NodeRole::PowerClock: ++supplies; break;
      case NodeRole::Internal:
        if (!touched[i])
          report(Diagnostic::Code::FloatingNode, n.name,
                 "internal node is not a terminal of any device");
        break;
      case NodeRole::Output:
        if (!(n.capacitance > 0.0))
          report(Diagnostic::Code::ZeroLoadCapacitance, n.name,
                 "output node carries no load capacitance");
        break;
      case NodeRole::Input: break;
    }
  }
  if (grounds == 0)
    report(Diagnostic::Code::MissingGroundRail, netlist.name(),
           "exactly one GND node is required");
  if (grounds > 1)
    report(Diagnostic::Code::MultipleGroundRails, netlist.name(),
           "exactly one GND node is required");
  if (supplies == 0)
    report(Diagnostic::Code::MissingSupply, netlist.name(),
           "need at least one VDD or PCLK node");

  auto check_listed = [&](NodeRole role, const std::vector<NodeId>& list) {
    for (std::uint32_t i = 0; i < netlist.node_count(); ++i) {
      if (netlist.node(NodeId(i)).role != role) continue;
      if (std::find(list.begin(), list.end(), NodeId(i)) == list.end())
        report(Diagnostic::Code::UnlistedPin, netlist.node(NodeId(i)).name,
               "pin role declared but missing from the ordered pin list");
    }
  };
  check_listed(NodeRole::Input, netlist.inputs());
  check_listed(NodeRole::Output, netlist.outputs());

  return out;
}

} // namespace adiasim
