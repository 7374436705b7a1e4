use std::io;

fn main() {
    let status =
        fermat_refute::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(status.code());
}
