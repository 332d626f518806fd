use std::process;

fn main() {
    // Die quietly when the consumer of our stdout goes away (e.g. piping
    // into `head`), like other line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let args: Vec<String> = std::env::args().collect();
    process::exit(subzero::cli::run_cli(&args));
}
