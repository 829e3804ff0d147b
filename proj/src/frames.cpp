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

#include "adclip/frames.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/videoio.hpp>

#include "adclip/errors.hpp"

namespace adclip {

namespace {

bool is_image_file(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

}  // namespace

FrameDirSource::FrameDirSource(const std::filesystem::path& dir, double fps)
    : fps_(fps) {
  if (fps <= 0.0)
    throw ValidationError("frame directory source needs a positive fps: " +
                          dir.string());
  if (!std::filesystem::is_directory(dir))
    throw ValidationError("not a frame directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path()))
      files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end());
  if (files_.empty())
    throw ValidationError("no image frames in directory: " + dir.string());
}

int FrameDirSource::frame_count() const {
  return static_cast<int>(files_.size());
}

double FrameDirSource::fps() const { return fps_; }

cv::Mat FrameDirSource::frame(int index) const {
  if (index < 0 || index >= frame_count())
    throw ValidationError("frame index out of range: " +
                          std::to_string(index));
  cv::Mat img = cv::imread(files_[static_cast<std::size_t>(index)].string(),
                           cv::IMREAD_COLOR);
  if (img.empty())
    throw ValidationError(
        "undecodable frame: " +
        files_[static_cast<std::size_t>(index)].string());
  return img;
}

VideoFileSource::VideoFileSource(const std::filesystem::path& path) {
  cv::VideoCapture cap(path.string());
  if (!cap.isOpened())
    throw ValidationError("cannot open video file: " + path.string());
  fps_ = cap.get(cv::CAP_PROP_FPS);
  cv::Mat frame;
  while (cap.read(frame)) frames_.push_back(frame.clone());
  if (frames_.empty())
    throw ValidationError("video has no decodable frames: " + path.string());
  if (fps_ <= 0.0) fps_ = 23.98;
}

int VideoFileSource::frame_count() const {
  return static_cast<int>(frames_.size());
}

double VideoFileSource::fps() const { return fps_; }

cv::Mat VideoFileSource::frame(int index) const {
  if (index < 0 || index >= frame_count())
    throw ValidationError("frame index out of range: " +
                          std::to_string(index));
  return frames_[static_cast<std::size_t>(index)];
}

MemoryFrameSource::MemoryFrameSource(std::vector<cv::Mat> frames, double fps)
    : frames_(std::move(frames)), fps_(fps) {}

int MemoryFrameSource::frame_count() const {
  return static_cast<int>(frames_.size());
}

double MemoryFrameSource::fps() const { return fps_; }

cv::Mat MemoryFrameSource::frame(int index) const {
  if (index < 0 || index >= frame_count())
    throw ValidationError("frame index out of range: " +
                          std::to_string(index));
  return frames_[static_cast<std::size_t>(index)];
}

ResampledFrameSource::ResampledFrameSource(
    std::shared_ptr<const FrameSource> source, double target_fps)
    : source_(std::move(source)), target_fps_(target_fps) {
  if (target_fps_ <= 0.0)
    throw ValidationError("target fps must be positive");
  const double ratio = target_fps_ / source_->fps();
  frame_count_ = std::max(
      1, static_cast<int>(std::lround(source_->frame_count() * ratio)));
}

int ResampledFrameSource::frame_count() const { return frame_count_; }

double ResampledFrameSource::fps() const { return target_fps_; }

int ResampledFrameSource::source_index(int index) const {
  const double pos = index * source_->fps() / target_fps_;
  int src = static_cast<int>(std::lround(pos));
  return std::clamp(src, 0, source_->frame_count() - 1);
}

cv::Mat ResampledFrameSource::frame(int index) const {
  if (index < 0 || index >= frame_count_)
    throw ValidationError("frame index out of range: " +
                          std::to_string(index));
  return source_->frame(source_index(index));
}

std::shared_ptr<FrameSource> open_frame_source(
    const std::filesystem::path& path, double fps_hint) {
  if (std::filesystem::is_directory(path))
    return std::make_shared<FrameDirSource>(path, fps_hint);
  if (!std::filesystem::exists(path))
    throw ValidationError("missing video file: " + path.string());
  return std::make_shared<VideoFileSource>(path);
}

}  // namespace adclip
