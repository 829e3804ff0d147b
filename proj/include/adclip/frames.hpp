// Copyright 2026 The adclip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace adclip {

// Random access to decoded video frames (BGR, 8 bit).
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual int frame_count() const = 0;
  virtual double fps() const = 0;
  virtual cv::Mat frame(int index) const = 0;
};

// A directory of image files; lexicographic file order is frame order.
class FrameDirSource : public FrameSource {
 public:
  FrameDirSource(const std::filesystem::path& dir, double fps);
  int frame_count() const override;
  double fps() const override;
  cv::Mat frame(int index) const override;

 private:
  std::vector<std::filesystem::path> files_;
  double fps_;
};

// A container video decoded through cv::VideoCapture. Frames are read
// sequentially and kept; ad-length inputs fit comfortably in memory.
class VideoFileSource : public FrameSource {
 public:
  explicit VideoFileSource(const std::filesystem::path& path);
  int frame_count() const override;
  double fps() const override;
  cv::Mat frame(int index) const override;

 private:
  std::vector<cv::Mat> frames_;
  double fps_ = 0.0;
};

// In-memory frames; test and fixture use.
class MemoryFrameSource : public FrameSource {
 public:
  MemoryFrameSource(std::vector<cv::Mat> frames, double fps);
  int frame_count() const override;
  double fps() const override;
  cv::Mat frame(int index) const override;

 private:
  std::vector<cv::Mat> frames_;
  double fps_;
};

// Presents an underlying source at target_fps by nearest-frame mapping.
// frame j of the output is source frame round(j * src_fps / target_fps).
class ResampledFrameSource : public FrameSource {
 public:
  ResampledFrameSource(std::shared_ptr<const FrameSource> source,
                       double target_fps);
  int frame_count() const override;
  double fps() const override;
  cv::Mat frame(int index) const override;

  int source_index(int index) const;

 private:
  std::shared_ptr<const FrameSource> source_;
  double target_fps_;
  int frame_count_;
};

// Directory -> FrameDirSource (fps required); file -> VideoFileSource.
std::shared_ptr<FrameSource> open_frame_source(
    const std::filesystem::path& path, double fps_hint = 0.0);

}  // namespace adclip
