// include/avst/dsp/visual.h

// Copyright 2026  The AVST Authors

// See the top-level LICENSE file for the full license text.
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

#ifndef AVST_DSP_VISUAL_H_
#define AVST_DSP_VISUAL_H_

#include <string>

#include "avst/dsp/feature-matrix.h"

namespace avst {

inline constexpr int kRoiWidth = 60;
inline constexpr int kRoiHeight = 30;
inline constexpr int kRoiDim = kRoiWidth * kRoiHeight;  // 1800

/// Mouth-ROI image sequence.  `frames` is num_frames x 1800, each row a
/// row-major 30-row by 60-column grayscale image scaled to [0, 1].
struct VisualTrack {
  FeatureMatrix frames;
  double fps = 25.0;

  int NumFrames() const { return static_cast<int>(frames.rows()); }
  void Validate(const std::string &what) const;
};

// On disk a track is either
//   - a single file: "ROIV", u32 version (1), u32 num_frames, f32 fps, then
//     num_frames * 1800 unsigned bytes; or
//   - a directory of raw 1800-byte frames, read in filename order, with the
//     frame rate supplied by the caller.
// Pixel bytes map to [0, 1] as b / 255.
VisualTrack ReadVisualTrack(const std::string &path, double dir_fps = 25.0);
void WriteVisualTrack(const std::string &path, const VisualTrack &track);

/// Rounds pixel values to the nearest 1/255 step so an in-memory track equals
/// the same track after a write/read cycle.
void QuantizePixels(VisualTrack *track);

/// Video frame used for audio frame t: audio frame t is centred at
/// (t + 0.5) * hop seconds, video frame j at (j + 0.5) / fps; the nearest
/// video centre wins, ties go to the later frame, and the result is clamped
/// to [0, num_video_frames).
int VisualFrameIndex(int t, double hop_seconds, double fps, int num_video_frames);

/// T_audio x 1800 matrix; row t is the flattened video frame chosen by
/// VisualFrameIndex.
FeatureMatrix AlignVisual(const VisualTrack &track, int num_audio_frames,
                          double hop_seconds);

}  // namespace avst

#endif  // AVST_DSP_VISUAL_H_
