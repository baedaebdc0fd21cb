// src/dsp/visual.cc

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

#include "avst/dsp/visual.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"

namespace avst {

namespace {
constexpr char kRoiMagic[4] = {'R', 'O', 'I', 'V'};
constexpr uint32_t kRoiVersion = 1;

uint8_t PixelToByte(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}
}  // namespace

void VisualTrack::Validate(const std::string &what) const {
  if (frames.rows() < 1) throw DataError(what + ": visual track has no frames");
  if (frames.cols() != kRoiDim)
    throw DataError(what + ": ROI frames must be 60x30 (1800 values), got " +
                    std::to_string(frames.cols()));
  if (!(fps > 0.0)) throw DataError(what + ": visual frame rate must be positive");
}

VisualTrack ReadVisualTrack(const std::string &path, double dir_fps) {
  VisualTrack track;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto &e : std::filesystem::directory_iterator(path))
      if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    track.fps = dir_fps;
    track.frames.resize(static_cast<Eigen::Index>(files.size()), kRoiDim);
    for (size_t j = 0; j < files.size(); ++j) {
      const std::string bytes = ReadFileBytes(files[j]);
      if (bytes.size() != kRoiDim)
        throw DataError(files[j] + ": ROI frame must be exactly 1800 bytes");
      for (int i = 0; i < kRoiDim; ++i)
        track.frames(static_cast<Eigen::Index>(j), i) =
            static_cast<uint8_t>(bytes[i]) / 255.0;
    }
  } else {
    const std::string bytes = ReadFileBytes(path);
    std::istringstream is(bytes, std::ios::binary);
    ExpectMagic(is, kRoiMagic, path);
    if (ReadU32(is, "ROI version") != kRoiVersion)
      throw DataError(path + ": unsupported ROI track version");
    const uint32_t n = ReadU32(is, "ROI frame count");
    track.fps = ReadF32(is, "ROI fps");
    if (bytes.size() != 16 + static_cast<size_t>(n) * kRoiDim)
      throw DataError(path + ": ROI payload size does not match frame count");
    track.frames.resize(n, kRoiDim);
    for (uint32_t j = 0; j < n; ++j)
      for (int i = 0; i < kRoiDim; ++i)
        track.frames(j, i) =
            static_cast<uint8_t>(bytes[16 + static_cast<size_t>(j) * kRoiDim + i]) / 255.0;
  }
  track.Validate(path);
  return track;
}

void WriteVisualTrack(const std::string &path, const VisualTrack &track) {
  track.Validate(path);
  std::ostringstream os(std::ios::binary);
  os.write(kRoiMagic, 4);
  WriteU32(os, kRoiVersion);
  WriteU32(os, static_cast<uint32_t>(track.frames.rows()));
  WriteF32(os, static_cast<float>(track.fps));
  std::string pixels(static_cast<size_t>(track.frames.rows()) * kRoiDim, '\0');
  for (Eigen::Index j = 0; j < track.frames.rows(); ++j)
    for (int i = 0; i < kRoiDim; ++i)
      pixels[static_cast<size_t>(j) * kRoiDim + i] =
          static_cast<char>(PixelToByte(track.frames(j, i)));
  WriteBytes(os, pixels);
  WriteFileBytes(path, os.str());
}

void QuantizePixels(VisualTrack *track) {
  // Route through the same float32 fps the file stores.
  track->fps = static_cast<float>(track->fps);
  for (Eigen::Index j = 0; j < track->frames.rows(); ++j)
    for (Eigen::Index i = 0; i < track->frames.cols(); ++i)
      track->frames(j, i) = PixelToByte(track->frames(j, i)) / 255.0;
}

int VisualFrameIndex(int t, double hop_seconds, double fps, int num_video_frames) {
  const double position = (t + 0.5) * hop_seconds * fps;
  const long j = static_cast<long>(std::floor(position));
  return static_cast<int>(std::clamp<long>(j, 0, num_video_frames - 1));
}

FeatureMatrix AlignVisual(const VisualTrack &track, int num_audio_frames,
                          double hop_seconds) {
  track.Validate("align_visual");
  FeatureMatrix out(num_audio_frames, kRoiDim);
  for (int t = 0; t < num_audio_frames; ++t)
    out.row(t) = track.frames.row(
        VisualFrameIndex(t, hop_seconds, track.fps, track.NumFrames()));
  return out;
}

}  // namespace avst
