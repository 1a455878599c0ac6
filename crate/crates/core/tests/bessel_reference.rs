//! Spherical Bessel evaluator against 40-digit reference values.

use emcavity::spectrum::{spherical_jn, spherical_jn_with_derivative};

/// `(l, x, j_l(x), j_l'(x))`
const REFERENCE: &[(usize, f64, f64, f64)] = &[
    (0, 0.37, 0.97733900531070804875, -0.12165313433695574472),
    (0, 1.0, 0.84147098480789650665, -0.30116867893975678925),
    (0, 2.5, 0.23938885764158259762, -0.41621298927540652498),
    (0, 7.3, 0.11649816720939239966, 0.056106760297494902638),
    (0, 19.99, 0.045463674399233959027, 0.018595662022591108433),
    (0, 33.3, 0.02856843059419765176, -0.010112503039498723341),
    (0, 58.1, 0.01720844372724656235, 0.000038802387422801062495),
    (0, 60.2, -0.0081054809264604937245, -0.014364885836661044266),
    (0, 88.8, 0.0083509994048986249676, 0.0074608770767376820091),
    (0, 99.9, -0.0059051467599340066252, 0.0081417798244192258359),
    (0, 121.7, 0.0060196061084557802131, -0.0056425145559529836219),
    (0, 150.5, -0.0019410258739779849031, 0.0063675837696849936291),
    (0, 177.77, 0.0054214258650676721455, -0.001531008542773429233),
    (0, 200.0, -0.0043664864860699729087, 0.0024577708074653794163),
    (1, 0.001, 0.00033333330000000119048, 0.33333323333333928571),
    (1, 0.37, 0.12165313433695574472, 0.31975449538121753676),
    (1, 1.0, 0.30116867893975678925, 0.23913362692838292815),
    (1, 2.5, 0.41621298927540652498, -0.093581533778742622365),
    (1, 7.3, -0.056106760297494902638, 0.13186988235939100312),
    (1, 19.99, -0.018595662022591108433, 0.047324170849718312047),
    (1, 33.3, 0.010112503039498723341, 0.027961073054287818526),
    (1, 60.2, 0.014364885836661044266, -0.0085827196585754785839),
    (1, 88.8, -0.0074608770767376820091, 0.0085190371768972214092),
    (1, 99.9, -0.0081417798244192258359, -0.0057421481648505386405),
    (1, 121.7, 0.0056425145559529836219, 0.0059268778495247533664),
    (1, 150.5, -0.0063675837696849936291, -0.001856406820560244124),
    (1, 177.77, 0.001531008542773429233, 0.00540420126538523496),
    (1, 200.0, -0.0024577708074653794163, -0.0043419087779953191145),
    (2, 0.001, 6.6666661904762037037e-8, 0.00013333331428571507937),
    (2, 0.37, 0.0090377595835277192336, 0.048374002578622886067),
    (2, 1.0, 0.062035052011373861102, 0.11506352290563520594),
    (2, 2.5, 0.26006672948890523236, 0.10413291388872024615),
    (2, 7.3, -0.13955573993439030485, 0.0012449136481449486719),
    (2, 19.99, -0.048254419074960488557, -0.011353878269470474833),
    (2, 33.3, -0.027657394284332901909, 0.012604160182231417207),
    (2, 58.1, -0.017210447292862197517, 0.00084986098398144321547),
    (2, 60.2, 0.0088213390246329710135, 0.013925284224137806508),
    (2, 88.8, -0.0086030560628965196301, -0.0071702332908290158054),
    (2, 99.9, 0.0056606488673088046482, -0.0083117692798939647143),
    (2, 121.7, -0.0058805137200592399431, 0.0057874738095288071209),
    (2, 150.5, 0.0018140972938513737344, -0.0064037451775358515773),
    (2, 177.77, -0.0053955889655440163673, 0.0016220630902034345719),
    (2, 200.0, 0.0043296199239579922174, -0.0025227151063247492996),
    (3, 0.001, 9.523808994709006734e-12, 2.8571425925926010101e-8),
    (3, 0.37, 0.0004787519269323530335, 0.0038620630761509296823),
    (3, 1.0, 0.0090065811171125162594, 0.026008727542923796065),
    (3, 2.5, 0.10392046970240393973, 0.093793977965058928785),
    (3, 7.3, -0.039479362945238182878, -0.11792321229316390328),
    (3, 19.99, 0.0065260224340567190995, -0.049560276490479591928),
    (3, 33.3, -0.014265264944053213117, -0.025943848945707891324),
    (3, 58.1, -0.0014423032315842727341, -0.017111149307899424867),
    (3, 60.2, -0.013632216482455648002, 0.0097271341397463031067),
    (3, 88.8, 0.0069764707668899050029, -0.0089173115028465153509),
    (3, 99.9, 0.0084250955835437906331, 0.0053233077028025467649),
    (3, 121.7, -0.0058841133119126894535, -0.0056871164049593980547),
    (3, 150.5, 0.0064278527827697568761, 0.0016432573527810811929),
    (3, 177.77, -0.0016827661218234381312, -0.0053577250712576139792),
    (3, 200.0, 0.0025660113055643292218, 0.004278299697846705633),
    (5, 0.001, 9.6200092500092561759e-20, 4.8100045510045565546e-16),
    (5, 0.37, 6.6358505403164444478e-7, 8.9484656676358145321e-6),
    (5, 1.0, 0.000092561158611258163567, 0.00045564885674620373226),
    (5, 2.5, 0.0073576387377689362884, 0.013252252707180351803),
    (5, 7.3, 0.16486146555622406217, -0.033803757867529099691),
    (5, 19.99, 0.016228205978603124578, 0.045668772309916881064),
    (5, 33.3, 0.020929775739117843762, 0.020887559177934116492),
    (5, 58.1, 0.004081375217343241898, 0.016615191287265822981),
    (5, 60.2, 0.012076430364769074587, -0.011610111409446990674),
    (5, 88.8, -0.0060488015355241267454, 0.0095617058892633450298),
    (5, 99.9, -0.0088818795321404440883, -0.004536855611276280134),
    (5, 121.7, 0.0062939622500204187037, 0.0052317662534732798905),
    (5, 150.5, -0.0065184584078382303385, -0.0012552553009848110755),
    (5, 177.77, 0.0019525751129630303554, 0.005263424857254978571),
    (5, 200.0, -0.002756802734336175053, -0.0041571054462331554431),
    (10, 0.001, 7.2730917874467300889e-41, 7.2730917558245918276e-37),
    (10, 0.37, 3.4869335127220755031e-15, 9.4185338780796097444e-14),
    (10, 1.0, 7.116552640047313024e-11, 7.0855571214994122236e-10),
    (10, 2.5, 6.0504362296385397812e-7, 2.3536792966529245879e-6),
    (10, 7.3, 0.0092331933854981527217, 0.0093873421700148779378),
    (10, 19.99, 0.039394552422655185996, 0.029372383729527520619),
    (10, 33.3, 0.012211562132454191526, 0.026476327187232880406),
    (10, 58.1, -0.010380437387127202603, 0.013861382335014451945),
    (10, 60.2, 0.016563499001899181809, 0.0021061750930981216332),
    (10, 88.8, -0.011225788493574208239, -0.0011641234373781270366),
    (10, 99.9, 0.00080151581552469826417, -0.009958510184646089641),
    (10, 121.7, -0.0029762773151132239135, 0.0076713947528382759744),
    (10, 150.5, -0.0004596025211170247449, -0.0066175191755420490059),
    (10, 177.77, -0.0047109890411626100925, 0.0031042253310079584067),
    (10, 200.0, 0.0035431728903142449403, -0.0035456363907373212188),
    (20, 0.001, 7.6259789162179685985e-86, 1.5251957814701102499e-81),
    (20, 0.37, 1.7605109310069201883e-34, 9.5147603373073853721e-33),
    (20, 1.0, 7.537795722236872994e-26, 1.505805261869805579e-24),
    (20, 2.5, 6.4488532759578935148e-18, 5.1214674305938620144e-17),
    (20, 7.3, 7.5127541269070165267e-9, 1.9270362401478173254e-8),
    (20, 19.99, 0.038186618619727660662, 0.013820523482473329344),
    (20, 33.3, 0.028690655918556895022, -0.015231737132958257559),
    (20, 58.1, -0.015684677950035431535, 0.0081500865205189846082),
    (20, 60.2, 0.013321036634707907496, 0.0098917610721946001852),
    (20, 88.8, -0.00078920664373832863503, -0.011072539529438132204),
    (20, 99.9, 0.010075095241286517843, 0.00080972334765305100775),
    (20, 121.7, -0.0065213601459780990056, -0.0049687305068258812342),
    (20, 150.5, 0.0059525555077180992033, 0.0029538132235272140536),
    (20, 177.77, 0.00066549556572666378992, -0.0055711225719711303302),
    (20, 200.0, -0.000055251946837803094922, 0.0049867983527554036646),
    (37, 0.001, 7.6249146344989716249e-167, 2.8212184137743708472e-162),
    (37, 0.37, 8.0410489137284309097e-72, 8.0406625169675676643e-70),
    (37, 1.0, 7.5755586140009649816e-56, 2.8019726866116490853e-54),
    (37, 2.5, 3.8759722132854691909e-41, 5.7238415945074282629e-40),
    (37, 7.3, 4.7231540179252077734e-24, 2.3487503017814578963e-23),
    (37, 19.99, 6.9950187392811799214e-9, 1.099378714590712511e-8),
    (37, 33.3, 0.0049611832398775813012, 0.0027149835131130209104),
    (37, 60.2, 0.018754891101372011404, -0.0011316113746783602127),
    (37, 88.8, 0.010090328730262847983, 0.0054680777259476333746),
    (37, 99.9, -0.010171415495416882632, 0.0021077851288519346728),
    (37, 121.7, 0.002399517141698213615, 0.0076618590585695922985),
    (37, 150.5, 0.0020804396134504461284, -0.0062350461038802976579),
    (37, 177.77, -0.0050648422293086422304, -0.0025046414962255368606),
    (37, 200.0, 0.003928620494903045093, 0.0030888797860776315762),
    (60, 0.37, 1.464391259313295267e-127, 2.3746444774299371342e-125),
    (60, 1.0, 1.1804018719355415482e-101, 7.0814514928686377532e-100),
    (60, 2.5, 8.6928011197862395987e-78, 2.0845047204541394566e-76),
    (60, 7.3, 6.01068140092015401e-50, 4.9044884386755980404e-49),
    (60, 19.99, 2.5562489461272675688e-24, 7.2457533177472073634e-24),
    (60, 33.3, 2.4236271222678009489e-12, 3.6552340112935750953e-12),
    (60, 58.1, 0.009237814248274632666, 0.0031985088088556961202),
    (60, 60.2, 0.017130366260102938447, 0.0040980935737597581587),
    (60, 88.8, -0.0049857152541079570024, -0.0088375284743976171259),
    (60, 99.9, -0.0056706980018680776319, 0.007778863794199821881),
    (60, 121.7, -0.0080812165131988902564, 0.0031457637681255968164),
    (60, 150.5, -0.0035186607918165756475, 0.0055069964373843305561),
    (60, 177.77, -0.0018718671862034482055, 0.005174226599605253673),
    (60, 200.0, 0.0048839124247658215298, -0.0014948955609741105442),
    (90, 0.37, 6.9498930385219101503e-206, 1.6905004711305789587e-203),
    (90, 1.0, 5.0442753548169483791e-167, 4.5395721677308824249e-165),
    (90, 2.5, 3.2446605236913536879e-131, 1.1676344470340656604e-129),
    (90, 7.3, 2.1865488733728815709e-89, 2.6870091151671241088e-88),
    (90, 19.99, 1.995858399984887334e-50, 8.7652029724304182341e-50),
    (90, 33.3, 2.4300793098264207975e-31, 6.1100819715054409359e-31),
    (90, 58.1, 1.7465809563642763729e-12, 2.0811396821360421927e-12),
    (90, 60.2, 1.9783322563246167616e-11, 2.2168964950697675248e-11),
    (90, 88.8, 0.0088511805860500799165, 0.0023466709044672597531),
    (90, 99.9, -0.0052700199309879605305, -0.0059733930502417477943),
    (90, 121.7, -0.0016601890192943363145, -0.0066053504667733448483),
    (90, 150.5, -0.0031377360013957000975, 0.0054111220111886362333),
    (90, 177.77, -0.0017006051994411017924, -0.0049981431366559582965),
    (90, 200.0, -0.0042638510855520540097, -0.0027752517807003883826),
    (119, 1.0, 2.1813411271655715232e-234, 2.5957054277014617793e-232),
    (119, 2.5, 4.8848804650729666672e-187, 2.3246963169449626824e-185),
    (119, 7.3, 1.064161231493087967e-131, 1.7315022514372604516e-130),
    (119, 19.99, 5.9574097240619589932e-80, 3.4966758194170150252e-79),
    (119, 33.3, 3.1742779034358690697e-54, 1.0896279838545997927e-53),
    (119, 58.1, 1.380118981877530876e-27, 2.4722906334969627267e-27),
    (119, 60.2, 5.443187627905418616e-26, 9.3037514912760704961e-26),
    (119, 88.8, 3.17388304912501092e-10, 2.8616986345824967258e-10),
    (119, 99.9, 1.8464203211932056236e-6, 1.2230884490913248204e-6),
    (119, 121.7, 0.014113917706150020897, 0.0013022174238120841502),
    (119, 150.5, 0.0085102875543535919154, -0.0003588319032807069819),
    (119, 177.77, 0.0063996533439845941395, 0.00093767064549268186055),
    (119, 200.0, -0.0016104475165087754166, 0.0042974268086395565437),
    (120, 1.0, 9.0513625568333263018e-237, 1.0861262577887390407e-234),
    (120, 2.5, 5.0678442976945116238e-189, 2.4320438249888230413e-187),
    (120, 7.3, 3.2263314076363713994e-133, 5.2938575159719626934e-132),
    (120, 19.99, 4.9756182400759463016e-81, 2.9456548113596603314e-80),
    (120, 33.3, 4.472357923509516016e-55, 1.5491868861846635504e-54),
    (120, 58.1, 3.5445908842087159762e-28, 6.4191674953802204099e-28),
    (120, 60.2, 1.4560380057462686286e-26, 2.5165996097110913061e-26),
    (120, 88.8, 1.3915905866548489892e-10, 1.2776841641561288515e-10),
    (120, 99.9, 9.7635117275043162812e-7, 6.6385283467866881673e-7),
    (120, 121.7, 0.012498573102332965043, 0.0016872345066242298523),
    (120, 150.5, 0.0070878964811416866359, 0.0028117129748310398692),
    (120, 177.77, 0.0033462847346848886103, 0.0041219886486092691586),
    (120, 200.0, -0.0052556430809622779166, 0.001569216547473402723),
];

#[test]
fn values_within_contract_accuracy() {
    let mut worst = 0.0_f64;
    for &(l, x, j, _) in REFERENCE {
        let got = spherical_jn(l, x);
        let rel = ((got - j) / j).abs();
        worst = worst.max(rel);
        assert!(rel <= 1e-12, "j_{l}({x}) = {got}, want {j}, rel {rel:e}");
    }
    println!("worst relative error {worst:e} over {} points", REFERENCE.len());
}

#[test]
fn derivatives_within_contract_accuracy() {
    for &(l, x, j, dj) in REFERENCE {
        let (_, got) = spherical_jn_with_derivative(l, x);
        let err = (got - dj).abs() / (dj.abs() + j.abs());
        assert!(err <= 1e-12, "j_{l}'({x}) = {got}, want {dj}, err {err:e}");
    }
}
