fn main() {
    std::process::exit(hyperhalt::cli::run(std::env::args_os()));
}
