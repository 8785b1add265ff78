// Frozen high-precision reference values (generated by tests/oracle/gen_reference.py).

pub const BESSEL_TABLE: &[(f64, f64, f64, f64, f64)] = &[
    (9.9999999999999995e-7, 0.99999999999975, -8.8690314816594437317, 4.9999999999993747737e-7, -636619.77237217504257),
    (0.0001, 0.99999999750000000156, -5.9372890697093369862, 0.000049999999937500002422, -6366.1980364557613213),
    (0.01, 0.99997500015624956597, -3.0054556370836459445, 0.0049999375002604162282, -63.678596282060655049),
    (0.10000000000000001, 0.997501562066040032, -1.5342386513503668083, 0.049937526036242000321, -6.4589510947020266377),
    (0.5, 0.93846980724081290423, -0.44451873350670655715, 0.24226845767487388638, -1.4714723926702430692),
    (1.0, 0.76519768655796655145, 0.088256964215676957983, 0.44005058574493351596, -0.78121282130028871655),
    (2.0, 0.22389077914123566805, 0.5103756726497451196, 0.5767248077568733872, -0.10703243154093754689),
    (2.4048255576957729, -6.1087652597367303971e-17, 0.50992438344847906518, 0.51914749728946676274, 0.1027466824382595953),
    (3.0, -0.26005195490193343762, 0.37685001001279038197, 0.33905895852593645893, 0.32467442479179997844),
    (5.0, -0.17759677131433830435, -0.30851762524903378007, -0.32757913759146522204, 0.1478631433912268448),
    (7.5, 0.26633965788037839687, 0.11731328614820863084, 0.13524842757970550518, -0.2591285104861162518),
    (10.0, -0.2459357644513483352, 0.055671167283599391424, 0.04347274616886143667, 0.24901542420695388392),
    (11.9, 0.02504944169958964508, -0.22983321394337506407, -0.22898324966192405505, -0.034711498334030609833),
    (12.0, 0.047689310796833536624, -0.22523731263436143369, -0.22344710449062761237, -0.05709921826089652105),
    (12.1, 0.069666773606807311849, -0.21843838055092548565, -0.21574897337692480827, -0.078736931451395745616),
    (15.0, -0.014224472826780773234, 0.20546429603891826479, 0.20510403861352276115, 0.02107362803687351194),
    (20.0, 0.16702466434058315473, 0.062640596809383831162, 0.066833124175850045579, -0.16551161436252129586),
    (33.299999999999997, 0.063338485947521251681, 0.12289749913503732589, 0.12386214790148009055, -0.061500722807785735016),
    (50.0, 0.055812327669251815005, -0.098064995470077079029, -0.097511828125175137661, -0.056795668562014767942),
    (100.0, 0.019985850304223122424, -0.077244313365083152254, -0.077145352014112158033, -0.020372312002759793305),
    (500.0, -0.034100556880731998265, 0.0105067087398313741, 0.010472613470372292844, 0.034111080629137135895),
    (1234.5, -0.013550379618035721909, 0.018222995047412551598, 0.01821750833739249827, 0.013557761447180334391),
    (10000.0, -0.0070961603533888014773, 0.0036478055589866058867, 0.0036474507555295803441, 0.007096342752536495135),
];
pub const SQUARE_H_K1: [[(f64, f64); 4]; 4] = [
    [(0.25, 0.0), (-0.084565417027904641354, -0.053829561864723218832), (-0.12818998354201789759, -0.10303177106949331698), (-0.084565417027904641354, -0.053829561864723218832)],
    [(-0.084565417027904641354, -0.053829561864723218832), (0.25, 0.0), (-0.084565417027904641354, -0.053829561864723218832), (-0.12818998354201789759, -0.10303177106949331698)],
    [(-0.12818998354201789759, -0.10303177106949331698), (-0.084565417027904641354, -0.053829561864723218832), (0.25, 0.0), (-0.084565417027904641354, -0.053829561864723218832)],
    [(-0.084565417027904641354, -0.053829561864723218832), (-0.12818998354201789759, -0.10303177106949331698), (-0.084565417027904641354, -0.053829561864723218832), (0.25, 0.0)],
];
pub const SQUARE_G0_K1: [[(f64, f64); 4]; 4] = [
    [(0.24623816383735786204, 0.23983991217241336168), (0.018315870380002582228, 0.20119638640251093541), (-0.058616359949959760907, 0.16496801799978502298), (0.018315870380002582228, 0.20119638640251093541)],
    [(0.018315870380002582228, 0.20119638640251093541), (0.24623816383735786204, 0.23983991217241336168), (0.018315870380002582228, 0.20119638640251093541), (-0.058616359949959760907, 0.16496801799978502298)],
    [(-0.058616359949959760907, 0.16496801799978502298), (0.018315870380002582228, 0.20119638640251093541), (0.24623816383735786204, 0.23983991217241336168), (0.018315870380002582228, 0.20119638640251093541)],
    [(0.018315870380002582228, 0.20119638640251093541), (-0.058616359949959760907, 0.16496801799978502298), (0.018315870380002582228, 0.20119638640251093541), (0.24623816383735786204, 0.23983991217241336168)],
];
