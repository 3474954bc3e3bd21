//! Binary entry point; all logic lives in the library's `cli` module.

fn main() {
    // Die quietly when the reader of a pipe goes away, like any filter
    // tool, instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(ctxlab::cli::run());
}
