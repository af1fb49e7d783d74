// Copyright 2026 The stereogen authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stereogen/inpaint.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fstream>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "stereogen/io.hpp"

namespace stereogen {

RasterImage inpaint_builtin(const RasterImage& image, const BitMask& holes, std::vector<std::string>* warnings) {
    if (image.width != holes.width || image.height != holes.height)
        throw DimensionError("inpaint_builtin image and hole mask shapes differ");

    const int w = image.width;
    const int h = image.height;
    const std::size_t n_holes = holes.popcount();
    if (n_holes == 0)
        return image;
    if (n_holes == holes.bits.size())
        throw EmptySelectionError("inpaint_builtin: image has no known pixels");

    // Image mean over known pixels, used only for fully-hole rows.
    float mean[3] = {0.0f, 0.0f, 0.0f};
    {
        double acc[3] = {0.0, 0.0, 0.0};
        std::size_t known = 0;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                if (holes.at(r, c))
                    continue;
                for (int ch = 0; ch < 3; ++ch)
                    acc[ch] += image.at(r, c, ch);
                ++known;
            }
        for (int ch = 0; ch < 3; ++ch)
            mean[ch] = static_cast<float>(acc[ch] / static_cast<double>(known));
    }

    RasterImage out = image;
    std::vector<int> right_src(static_cast<std::size_t>(w));
    std::vector<int> left_src(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        int next = -1;
        for (int c = w - 1; c >= 0; --c) {
            if (!holes.at(r, c))
                next = c;
            right_src[c] = next;
        }
        int prev = -1;
        for (int c = 0; c < w; ++c) {
            if (!holes.at(r, c))
                prev = c;
            left_src[c] = prev;
        }
        bool row_empty = true;
        for (int c = 0; c < w; ++c)
            if (!holes.at(r, c)) {
                row_empty = false;
                break;
            }
        if (row_empty) {
            if (warnings)
                warnings->push_back("inpaint: row " + std::to_string(r) + " is fully holes, filled with image mean");
            for (int c = 0; c < w; ++c)
                for (int ch = 0; ch < 3; ++ch)
                    out.at(r, c, ch) = mean[ch];
            continue;
        }
        for (int c = 0; c < w; ++c) {
            if (!holes.at(r, c))
                continue;
            const int src = right_src[c] >= 0 ? right_src[c] : left_src[c];
            for (int ch = 0; ch < 3; ++ch)
                out.at(r, c, ch) = image.at(r, src, ch);
        }
    }
    return out;
}

namespace {

struct CommandResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string log;
};

std::string read_text_file(const std::filesystem::path& p, std::size_t max_bytes = 8192) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        return {};
    std::string s(max_bytes, '\0');
    in.read(s.data(), static_cast<std::streamsize>(max_bytes));
    s.resize(static_cast<std::size_t>(in.gcount()));
    return s;
}

/// Runs `command` via /bin/sh -c with `workdir` as current directory, stdout
/// and stderr captured to a log file, killed after `timeout`.
CommandResult run_command(const std::string& command, const std::filesystem::path& workdir,
                          std::chrono::milliseconds timeout) {
    const std::filesystem::path log_path = workdir / "backend.log";

    const pid_t pid = ::fork();
    if (pid < 0)
        throw BackendError(std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0) {
        if (::chdir(workdir.c_str()) != 0)
            ::_exit(127);
        const int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            ::dup2(fd, STDOUT_FILENO);
            ::dup2(fd, STDERR_FILENO);
            ::close(fd);
        }
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }

    CommandResult result;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    int status = 0;
    for (;;) {
        const pid_t waited = ::waitpid(pid, &status, WNOHANG);
        if (waited == pid)
            break;
        if (waited < 0)
            throw BackendError(std::string("waitpid failed: ") + std::strerror(errno));
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
    result.log = read_text_file(log_path);
    return result;
}

std::string substitute(std::string s, const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = s.find(key, pos)) != std::string::npos) {
        s.replace(pos, key.size(), value);
        pos += value.size();
    }
    return s;
}

} // namespace

RasterImage inpaint_external(const RasterImage& image, const BitMask& holes, const ExternalInpaintOptions& opts) {
    if (image.width != holes.width || image.height != holes.height)
        throw DimensionError("inpaint_external image and hole mask shapes differ");
    if (opts.command_template.find("{output}") == std::string::npos)
        throw ParameterError("inpaint command template must contain the {output} placeholder");
    if (opts.workdir.empty())
        throw ParameterError("inpaint_external requires a working directory");

    std::filesystem::create_directories(opts.workdir);
    const std::filesystem::path image_path = std::filesystem::absolute(opts.workdir / "input.png");
    const std::filesystem::path mask_path = std::filesystem::absolute(opts.workdir / "mask.png");
    const std::filesystem::path output_path = std::filesystem::absolute(opts.workdir / "output.png");
    write_image(image, image_path);
    write_mask_png(holes, mask_path);
    std::error_code ec;
    std::filesystem::remove(output_path, ec);

    std::string command = opts.command_template;
    command = substitute(std::move(command), "{image}", image_path.string());
    command = substitute(std::move(command), "{mask}", mask_path.string());
    command = substitute(std::move(command), "{output}", output_path.string());

    const CommandResult result = run_command(command, opts.workdir, opts.timeout);
    if (result.timed_out)
        throw TimeoutError("inpaint backend exceeded " + std::to_string(opts.timeout.count()) + " ms: " + command);
    if (result.exit_code != 0)
        throw BackendError("inpaint backend exited with status " + std::to_string(result.exit_code) + "\ncommand: " +
                           command + "\nlog:\n" + result.log);
    if (!std::filesystem::exists(output_path))
        throw ProtocolError("inpaint backend produced no output file\ncommand: " + command + "\nlog:\n" + result.log);

    RasterImage backend_out = read_image(output_path);
    if (backend_out.width != image.width || backend_out.height != image.height)
        throw ProtocolError("inpaint backend output has wrong dimensions (" + std::to_string(backend_out.width) + "x" +
                            std::to_string(backend_out.height) + ", expected " + std::to_string(image.width) + "x" +
                            std::to_string(image.height) + ")");

    // The backend owns only the holes; known pixels are re-composited from
    // the input so the warp geometry survives arbitrary backend behavior.
    RasterImage out = image;
    for (int r = 0; r < image.height; ++r)
        for (int c = 0; c < image.width; ++c)
            if (holes.at(r, c))
                for (int ch = 0; ch < 3; ++ch)
                    out.at(r, c, ch) = backend_out.at(r, c, ch);
    return out;
}

} // namespace stereogen
