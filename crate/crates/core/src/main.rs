fn main() {
    // dying quietly on a closed pipe beats a panic backtrace under `| head`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(mathlint::cli::run(std::env::args_os()))
}
