#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>

#include "evodyn/dynamics.hpp"
#include "evodyn/forms.hpp"
#include "evodyn/game_tree.hpp"
#include "evodyn/stability.hpp"

namespace evodyn {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict game-file schema: {"players": [a, b], "root": id, "nodes": {id: ...}}.
// Unknown fields are rejected.
GameTree parse_game_json(const std::string& text);
std::string game_to_json(const GameTree& g);

// Strategy profile file: {"agent1": {label: prob, ...}, "agent2": {...}}.
// Labels are plan strings, sequence strings ("" for the empty sequence) or
// "infoset:action" for behavioral strategies.
struct ProfileFile {
  std::array<std::map<std::string, double>, 2> entries;
};

ProfileFile parse_profile_json(const std::string& text);

SequenceStrategy profile_to_sequence(const ProfileFile& p, const SequenceForm& sf, int agent);
NormalStrategy profile_to_normal(const ProfileFile& p, const PlanSet& plans, int agent);
BehavioralStrategy profile_to_behavioral(const ProfileFile& p, const GameTree& g, int agent);

std::string normal_form_to_json(const NormalForm& nf);
std::string sequence_form_to_json(const SequenceForm& sf);
std::string stability_report_to_json(const StabilityReport& rep);
std::string equivalence_to_json(const EquivalenceResult& res);
std::string validation_report_to_json(const ValidationReport& rep);

// Header "t", one column per coordinate ("agent:label"), then u1, u2,
// residual; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const std::vector<std::string>& labels1,
                          const std::vector<std::string>& labels2,
                          const std::vector<TrajectoryPoint>& traj);

}  // namespace evodyn
