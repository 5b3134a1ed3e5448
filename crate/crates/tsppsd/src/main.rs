fn main() {
    let code = tsppsd::run(std::env::args_os());
    std::process::exit(code);
}
