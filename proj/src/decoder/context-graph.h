// decoder/context-graph.h

// Copyright 2026  asrlab authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRLAB_DECODER_CONTEXT_GRAPH_H_
#define ASRLAB_DECODER_CONTEXT_GRAPH_H_

#include <string>
#include <vector>

#include "decoder/lexicon.h"
#include "hmm/acoustic-model.h"
#include "hmm/state-graph.h"

namespace asrlab {

/// Graph over phone occurrences.  `group` identifies one word instance (or
/// one silence); skip transitions never leave a group.
struct PhoneNode {
  int phone = 0;
  int word = -1;            // word label carried by the node
  bool word_start = false;  // first phone of a pronunciation
  int group = 0;
  bool initial = false;
  bool final = false;
};

struct PhoneArc {
  int from = 0;
  int to = 0;
  bool internal = false;  // inside one pronunciation
};

struct PhoneGraph {
  std::vector<PhoneNode> nodes;
  std::vector<PhoneArc> arcs;

  int AddNode(const PhoneNode &node);
  void AddArc(int from, int to, bool internal) { arcs.push_back({from, to, internal}); }
};

/// HMM state graph with word labels: arc_word[a] is the word entered by arc
/// a (-1 if none) and initial_word[i] the word entered by starting in
/// graph.Initial()[i].
struct ContextGraph {
  StateGraph graph;
  std::vector<int> arc_word;
  std::vector<int> initial_word;
  std::vector<std::vector<int>> node_copies;  // first state of each copy, per phone node
};

/// Expands phone occurrences into triphone HMM states.  Each non-silence
/// node is copied once per (left phone, right phone) pair its neighbours
/// allow, including phones across word boundaries (the utterance edges count
/// as silence); the silence phone is context independent.  Copies are
/// linked only when contexts agree, so every phone path maps to exactly one
/// state path.  Emission ids come from the model's tree, arc weights from its
/// topology.
ContextGraph BuildContextGraph(const PhoneGraph &phones, const AcousticModel &model);

struct ExpandOptions {
  bool optional_silence = true;  // before, between and after words
  std::string unknown_word;      // lexicon entry for missing words ("" = error)
};

/// Training graph for a transcript: words in order with their pronunciation
/// variants as parallel branches.  canonical_path follows the first
/// pronunciations without silence.  Throws MissingWord.
StateGraph ExpandTranscript(const std::vector<std::string> &words, const Lexicon &lexicon,
                            const AcousticModel &model, const ExpandOptions &opts = {});

/// Word-loop graph over the whole lexicon for decoding: optional leading
/// silence, any word sequence of length >= 1 with optional silence between
/// and after words.  Word labels are lexicon word ids.
ContextGraph BuildDecodingGraph(const Lexicon &lexicon, const AcousticModel &model);

}  // namespace asrlab

#endif  // ASRLAB_DECODER_CONTEXT_GRAPH_H_
