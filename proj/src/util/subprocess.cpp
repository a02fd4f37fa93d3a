#include "miner/util/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>

#include "miner/error.hpp"

namespace miner {
namespace {

struct Pipe {
  int rd = -1;
  int wr = -1;

  void open() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) raise(Errc::io_failure, "pipe2 failed");
    rd = fds[0];
    wr = fds[1];
  }
  static void close_fd(int& fd) {
    if (fd >= 0) {
      ::close(fd);
      fd = -1;
    }
  }
  ~Pipe() {
    close_fd(rd);
    close_fd(wr);
  }
};

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, std::string_view stdin_data,
                          const RunOptions& options) {
  if (argv.empty()) raise(Errc::spawn_failure, "empty argv");
  ignore_sigpipe_once();

  Pipe in, out, err, exec_err;
  in.open();
  out.open();
  err.open();
  exec_err.open();  // child writes errno here if exec fails; CLOEXEC otherwise

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) raise(Errc::spawn_failure, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);  // own process group so a timeout can kill helpers too
    ::dup2(in.rd, STDIN_FILENO);
    ::dup2(out.wr, STDOUT_FILENO);
    ::dup2(err.wr, STDERR_FILENO);
    if (options.cwd && ::chdir(options.cwd->c_str()) != 0) _exit(127);
    ::execvp(cargv[0], cargv.data());
    const int e = errno;
    (void)!::write(exec_err.wr, &e, sizeof e);
    _exit(127);
  }

  Pipe::close_fd(in.rd);
  Pipe::close_fd(out.wr);
  Pipe::close_fd(err.wr);
  Pipe::close_fd(exec_err.wr);
  set_nonblocking(in.wr);
  set_nonblocking(out.rd);
  set_nonblocking(err.rd);
  if (stdin_data.empty()) Pipe::close_fd(in.wr);

  ProcessResult result;
  std::size_t written = 0;
  const auto deadline = options.timeout
                            ? std::optional(std::chrono::steady_clock::now() + *options.timeout)
                            : std::nullopt;
  bool killed = false;

  auto drain = [](int fd, std::string& sink) {
    char buf[64 * 1024];
    for (;;) {
      const ssize_t n = ::read(fd, buf, sizeof buf);
      if (n > 0) {
        sink.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return false;
      return true;  // EOF or error: stop watching
    }
  };

  while (in.wr >= 0 || out.rd >= 0 || err.rd >= 0) {
    struct pollfd fds[3];
    nfds_t n = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (in.wr >= 0) {
      idx_in = static_cast<int>(n);
      fds[n++] = {in.wr, POLLOUT, 0};
    }
    if (out.rd >= 0) {
      idx_out = static_cast<int>(n);
      fds[n++] = {out.rd, POLLIN, 0};
    }
    if (err.rd >= 0) {
      idx_err = static_cast<int>(n);
      fds[n++] = {err.rd, POLLIN, 0};
    }

    int wait_ms = 1000;
    if (deadline) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          *deadline - std::chrono::steady_clock::now());
      wait_ms = static_cast<int>(std::max<long long>(0, left.count()));
    }
    const int rc = ::poll(fds, n, wait_ms);
    if (rc < 0 && errno != EINTR) break;

    if (deadline && std::chrono::steady_clock::now() >= *deadline && !killed) {
      ::kill(-pid, SIGKILL);
      killed = true;
      result.timed_out = true;
      Pipe::close_fd(in.wr);
    }

    if (idx_in >= 0 && in.wr >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[idx_in].revents & (POLLERR | POLLHUP)) {
        Pipe::close_fd(in.wr);  // child stopped reading; not an error by itself
      } else {
        const ssize_t w = ::write(in.wr, stdin_data.data() + written, stdin_data.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if ((w < 0 && errno != EAGAIN && errno != EWOULDBLOCK) || written == stdin_data.size())
          Pipe::close_fd(in.wr);
      }
    }
    if (idx_out >= 0 && out.rd >= 0 && (fds[idx_out].revents & (POLLIN | POLLHUP | POLLERR))) {
      if (drain(out.rd, result.out)) Pipe::close_fd(out.rd);
      if (result.out.size() > options.max_stdout_bytes) {
        result.stdout_truncated = true;
        result.out.resize(options.max_stdout_bytes);
        if (!killed) {
          ::kill(-pid, SIGKILL);
          killed = true;
        }
        Pipe::close_fd(out.rd);
        Pipe::close_fd(in.wr);
      }
    }
    if (idx_err >= 0 && err.rd >= 0 && (fds[idx_err].revents & (POLLIN | POLLHUP | POLLERR))) {
      if (drain(err.rd, result.err)) Pipe::close_fd(err.rd);
    }
  }

  int status = 0;
  ::waitpid(pid, &status, 0);

  int exec_errno = 0;
  if (::read(exec_err.rd, &exec_errno, sizeof exec_errno) == sizeof(exec_errno)) {
    raise(Errc::spawn_failure,
          "cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

}  // namespace miner
