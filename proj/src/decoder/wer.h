// decoder/wer.h

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

#ifndef ASRLAB_DECODER_WER_H_
#define ASRLAB_DECODER_WER_H_

#include <map>
#include <string>
#include <vector>

namespace asrlab {

struct WerBreakdown {
  long substitutions = 0;
  long insertions = 0;
  long deletions = 0;
  long reference_words = 0;
  double wer = 0.0;  // (S + I + D) / N

  long Errors() const { return substitutions + insertions + deletions; }
};

/// Minimum edit alignment with unit costs.  Among minimal alignments the
/// one with the fewest insertions (hence the most substitutions) is chosen,
/// so the breakdown is unique.  Throws EmptyReference for an empty reference.
WerBreakdown ComputeWer(const std::vector<std::string> &ref,
                        const std::vector<std::string> &hyp);

using Transcripts = std::map<std::string, std::vector<std::string>>;

/// Sums S/I/D/N over utterances, then divides.  Both sides must hold the
/// same utterance ids (IdMismatch otherwise).
WerBreakdown ScoreCorpus(const Transcripts &refs, const Transcripts &hyps);

/// "<utt-id> w1 w2 ..." lines.
Transcripts ParseTranscripts(const std::string &text);
Transcripts ReadTranscripts(const std::string &path);
void WriteTranscripts(const std::string &path, const Transcripts &trans);

}  // namespace asrlab

#endif  // ASRLAB_DECODER_WER_H_
