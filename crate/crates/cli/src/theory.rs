//! The `theory` subcommand: closed-form reference tables.

use crate::TheoryArgs;
use chaotic_modem::analysis::{bpsk_bound, csk_coherent_bound, fsk_pe, fsk_pe_note};
use chaotic_modem::channel::NoiseConvention;
use chaotic_modem::error::Error;
use chaotic_modem::harness::parse_ebno_grid;
use chaotic_modem::modem::SUPPORTED_ORDERS;

pub fn cmd_theory(args: TheoryArgs) -> Result<(), Error> {
    let grid = parse_ebno_grid(&args.ebno)?;
    let mods = crate::parse_mod_list(&args.mods)?;
    for &m in &mods {
        if !SUPPORTED_ORDERS.contains(&m) {
            return Err(Error::Config(format!(
                "modulation order must be one of {SUPPORTED_ORDERS:?}, got {m}"
            )));
        }
    }
    let conv = NoiseConvention::parse(&args.noise_convention)?;

    println!("# noise convention: {}", conv.label());
    println!("# {}", fsk_pe_note(conv));
    print!("ebno_db,bpsk_bound,csk_coherent");
    for m in &mods {
        print!(",fsk_pe_M{m}");
    }
    println!();
    for &g in &grid {
        print!(
            "{g},{:.9e},{:.9e}",
            bpsk_bound(g),
            csk_coherent_bound(g, conv)
        );
        for &m in &mods {
            print!(",{:.9e}", fsk_pe(g, m, conv));
        }
        println!();
    }
    Ok(())
}
