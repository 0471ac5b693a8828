fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let out = azumaya::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
