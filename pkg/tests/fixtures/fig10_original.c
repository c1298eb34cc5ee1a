int strv_length(long *param_1)

{
  int iVar1;

  iVar1 = 0;
  if (param_1 == (long *)0x0) {
    return 0;
  }
  if (*param_1 != 0) {
    do {
      param_1 = param_1 + 1;
      iVar1 = iVar1 + 1;
    } while (*param_1 != 0);
    return iVar1;
  }
  return 0;
}
