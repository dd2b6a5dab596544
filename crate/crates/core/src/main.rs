fn main() {
    std::process::exit(twistloop::report::cli_main(std::env::args_os()));
}
